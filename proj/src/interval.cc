#include "oneata/interval.hh"

#include <stdexcept>

namespace oneata {

Interval Interval::make(long long lower, bool lower_closed, std::optional<long long> upper,
                        bool upper_closed) {
  if (lower < 0 || (upper && *upper < 0))
    throw std::invalid_argument("interval endpoints must be natural numbers");
  if (!upper && upper_closed)
    throw std::invalid_argument("interval cannot be closed at infinity");
  if (upper && (*upper < lower || (*upper == lower && !(lower_closed && upper_closed))))
    throw std::invalid_argument("empty interval");
  return Interval{lower, upper, lower_closed, upper_closed};
}

bool Interval::contains(const Rational &v) const {
  Rational lo(lower);
  if (v < lo || (v == lo && !lower_closed))
    return false;
  if (!upper)
    return true;
  Rational hi(*upper);
  return v < hi || (v == hi && upper_closed);
}

std::optional<Interval> Interval::intersect(const Interval &o) const {
  Interval r;
  if (lower > o.lower) {
    r.lower = lower;
    r.lower_closed = lower_closed;
  } else if (o.lower > lower) {
    r.lower = o.lower;
    r.lower_closed = o.lower_closed;
  } else {
    r.lower = lower;
    r.lower_closed = lower_closed && o.lower_closed;
  }
  if (!upper) {
    r.upper = o.upper;
    r.upper_closed = o.upper_closed;
  } else if (!o.upper || *upper < *o.upper) {
    r.upper = upper;
    r.upper_closed = upper_closed;
  } else if (*o.upper < *upper) {
    r.upper = o.upper;
    r.upper_closed = o.upper_closed;
  } else {
    r.upper = upper;
    r.upper_closed = upper_closed && o.upper_closed;
  }
  if (r.upper && (*r.upper < r.lower || (*r.upper == r.lower && !(r.lower_closed && r.upper_closed))))
    return std::nullopt;
  return r;
}

std::string to_string(const Interval &i) {
  std::string s = i.lower_closed ? "[" : "(";
  s += std::to_string(i.lower) + ",";
  s += i.upper ? std::to_string(*i.upper) : "inf";
  s += i.upper_closed ? "]" : ")";
  return s;
}

} // namespace oneata
