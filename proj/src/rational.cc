#include "oneata/rational.hh"

#include <cctype>
#include <stdexcept>

namespace oneata {

namespace {

long long parse_natural(std::string_view s, std::string_view whole) {
  if (s.empty())
    throw std::invalid_argument("malformed number '" + std::string(whole) + "'");
  long long v = 0;
  for (char ch : s) {
    if (!std::isdigit(static_cast<unsigned char>(ch)))
      throw std::invalid_argument("malformed number '" + std::string(whole) + "'");
    if (v > (1LL << 58))
      throw std::invalid_argument("number too large '" + std::string(whole) + "'");
    v = v * 10 + (ch - '0');
  }
  return v;
}

} // namespace

Rational parse_rational(std::string_view text) {
  std::string_view t = text;
  bool neg = false;
  if (!t.empty() && (t.front() == '-' || t.front() == '+')) {
    neg = t.front() == '-';
    t.remove_prefix(1);
  }
  Rational r;
  if (auto slash = t.find('/'); slash != std::string_view::npos) {
    long long den = parse_natural(t.substr(slash + 1), text);
    if (den == 0)
      throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
    r = Rational(parse_natural(t.substr(0, slash), text), den);
  } else if (auto dot = t.find('.'); dot != std::string_view::npos) {
    std::string_view ip = t.substr(0, dot), fp = t.substr(dot + 1);
    if (fp.size() > 15)
      throw std::invalid_argument("too many decimals in '" + std::string(text) + "'");
    long long scale = 1;
    for (size_t i = 0; i < fp.size(); ++i)
      scale *= 10;
    long long ipart = ip.empty() ? 0 : parse_natural(ip, text);
    long long fpart = fp.empty() ? 0 : parse_natural(fp, text);
    if (ip.empty() && fp.empty())
      throw std::invalid_argument("malformed number '" + std::string(text) + "'");
    r = Rational(ipart) + Rational(fpart, scale);
  } else {
    r = Rational(parse_natural(t, text));
  }
  return neg ? -r : r;
}

std::string to_string(const Rational &r) {
  long long den = r.denominator();
  long long d = den;
  int twos = 0, fives = 0;
  while (d % 2 == 0) {
    d /= 2;
    ++twos;
  }
  while (d % 5 == 0) {
    d /= 5;
    ++fives;
  }
  int digits = std::max(twos, fives);
  if (d != 1 || digits > 6)
    return std::to_string(r.numerator()) + "/" + std::to_string(den);
  if (den == 1)
    return std::to_string(r.numerator());
  long long scale = 1;
  for (int i = 0; i < digits; ++i)
    scale *= 10;
  Rational a = r < 0 ? -r : r;
  long long ip = floor_of(a);
  long long fp = boost::rational_cast<long long>((a - Rational(ip)) * Rational(scale));
  std::string f = std::to_string(fp);
  f.insert(0, static_cast<size_t>(digits) - f.size(), '0');
  return (r < 0 ? "-" : "") + std::to_string(ip) + "." + f;
}

long long floor_of(const Rational &r) {
  long long n = r.numerator(), d = r.denominator();
  long long q = n / d;
  if (n % d != 0 && n < 0)
    --q;
  return q;
}

long long ceil_of(const Rational &r) {
  long long f = floor_of(r);
  return is_integer(r) ? f : f + 1;
}

std::optional<Rational> simplest_between(const std::optional<RationalEnd> &lo,
                                         const std::optional<RationalEnd> &hi) {
  auto above_lo = [&](const Rational &x) {
    return !lo || x > lo->value || (lo->closed && x == lo->value);
  };
  auto below_hi = [&](const Rational &x) {
    return !hi || x < hi->value || (hi->closed && x == hi->value);
  };
  if (lo && hi) {
    if (lo->value > hi->value)
      return std::nullopt;
    if (lo->value == hi->value)
      return (lo->closed && hi->closed) ? std::optional<Rational>(lo->value) : std::nullopt;
  }
  if (!lo) {
    if (!hi)
      return Rational(0);
    long long k = floor_of(hi->value);
    Rational c(k);
    return below_hi(c) ? c : Rational(k - 1);
  }
  long long k = floor_of(lo->value);
  for (long long cand = k; cand <= k + 1; ++cand) {
    Rational c(cand);
    if (above_lo(c) && below_hi(c))
      return c;
  }
  for (long long q = 2; q < 1000000; ++q) {
    long long p = floor_of(lo->value * Rational(q));
    for (long long cp = p; cp <= p + 1; ++cp) {
      Rational c(cp, q);
      if (above_lo(c) && below_hi(c))
        return c;
    }
  }
  return (lo->value + hi->value) / Rational(2);
}

} // namespace oneata
