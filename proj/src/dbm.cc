#include "oneata/dbm.hh"

#include <algorithm>
#include <functional>

namespace oneata {

bool Bound::admits(const Rational &d) const {
  if (is_inf())
    return true;
  Rational k(value());
  return strict() ? d < k : d <= k;
}

std::string to_string(Bound b) {
  if (b.is_inf())
    return "< inf";
  return std::string(b.strict() ? "< " : "<= ") + std::to_string(b.value());
}

Dbm::Dbm(std::vector<VarName> vars) : vars_(std::move(vars)), m_(dim() * dim(), Bound::inf()) {
  for (size_t i = 0; i < dim(); ++i) {
    set(i, i, Bound::zero());
    set(0, i, Bound::zero());
  }
}

std::optional<size_t> Dbm::index_of(const VarName &v) const {
  auto it = std::find(vars_.begin(), vars_.end(), v);
  if (it == vars_.end())
    return std::nullopt;
  return static_cast<size_t>(it - vars_.begin()) + 1;
}

bool Dbm::canonicalize() {
  size_t n = dim();
  for (size_t k = 0; k < n; ++k)
    for (size_t i = 0; i < n; ++i) {
      Bound ik = at(i, k);
      if (ik.is_inf())
        continue;
      for (size_t j = 0; j < n; ++j) {
        Bound c = ik + at(k, j);
        if (c < at(i, j))
          set(i, j, c);
      }
    }
  for (size_t i = 0; i < n; ++i)
    if (at(i, i) < Bound::zero())
      return false;
  return true;
}

bool Dbm::constrain(size_t i, size_t j, Bound b) {
  if (!(b < at(i, j)))
    return true;
  if (at(j, i) + b < Bound::zero())
    return false;
  set(i, j, b);
  size_t n = dim();
  for (size_t k = 0; k < n; ++k) {
    Bound ki = at(k, i);
    if (ki.is_inf())
      continue;
    for (size_t l = 0; l < n; ++l) {
      Bound c = ki + b + at(j, l);
      if (c < at(k, l))
        set(k, l, c);
    }
  }
  return true;
}

bool Dbm::constrain_interval(size_t i, const Interval &in) {
  Bound lo = in.lower_closed ? Bound::le(-in.lower) : Bound::lt(-in.lower);
  if (!constrain(0, i, lo))
    return false;
  if (in.upper)
    return constrain(i, 0, in.upper_closed ? Bound::le(*in.upper) : Bound::lt(*in.upper));
  return true;
}

void Dbm::up() {
  for (size_t i = 1; i < dim(); ++i)
    set(i, 0, Bound::inf());
}

void Dbm::reset(size_t i) {
  for (size_t j = 0; j < dim(); ++j) {
    if (j == i)
      continue;
    set(i, j, at(0, j));
    set(j, i, at(j, 0));
  }
  set(i, i, Bound::zero());
}

Dbm Dbm::project(const std::vector<size_t> &keep) const {
  std::vector<VarName> vs;
  for (size_t k : keep)
    vs.push_back(vars_.at(k - 1));
  Dbm r(std::move(vs));
  std::vector<size_t> idx{0};
  idx.insert(idx.end(), keep.begin(), keep.end());
  for (size_t a = 0; a < idx.size(); ++a)
    for (size_t b = 0; b < idx.size(); ++b)
      r.set(a, b, at(idx[a], idx[b]));
  return r;
}

Dbm Dbm::renamed(std::vector<VarName> vars) const {
  Dbm r = *this;
  r.vars_ = std::move(vars);
  return r;
}

bool Dbm::includes(const Dbm &other) const {
  for (size_t i = 0; i < m_.size(); ++i)
    if (other.m_[i] > m_[i])
      return false;
  return true;
}

bool Dbm::contains(const Valuation &v) const {
  auto val = [&](size_t i) { return i == 0 ? Rational(0) : v[i - 1]; };
  for (size_t i = 0; i < dim(); ++i)
    for (size_t j = 0; j < dim(); ++j)
      if (i != j && !at(i, j).admits(val(i) - val(j)))
        return false;
  return true;
}

std::optional<Dbm> Dbm::intersect(const Dbm &other) const {
  Dbm r = *this;
  bool tightened = false;
  for (size_t i = 0; i < m_.size(); ++i)
    if (other.m_[i] < r.m_[i]) {
      r.m_[i] = other.m_[i];
      tightened = true;
    }
  if (tightened && !r.canonicalize())
    return std::nullopt;
  return r;
}

size_t Dbm::hash() const {
  size_t h = vars_.size();
  auto mix = [&](size_t x) { h ^= x + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2); };
  for (const auto &v : vars_) {
    mix(static_cast<size_t>(v.loc));
    mix(static_cast<size_t>(v.index));
  }
  for (Bound b : m_)
    mix(static_cast<size_t>(b.raw()));
  return h;
}

long long Dbm::max_constant() const {
  long long m = 0;
  for (Bound b : m_)
    if (!b.is_inf())
      m = std::max<long long>(m, b.value() < 0 ? -b.value() : b.value());
  return m;
}

namespace {

using Picker = std::function<std::optional<Rational>(const std::optional<RationalEnd> &,
                                                     const std::optional<RationalEnd> &)>;

std::optional<Valuation> sample_with(const Dbm &z, const std::map<size_t, Rational> &fixed,
                                     const Picker &pick) {
  size_t n = z.dim();
  std::vector<std::optional<Rational>> val(n);
  val[0] = Rational(0);
  auto consistent = [&](size_t i) {
    for (size_t j = 0; j < n; ++j)
      if (j != i && val[j]) {
        if (!z.at(i, j).admits(*val[i] - *val[j]) || !z.at(j, i).admits(*val[j] - *val[i]))
          return false;
      }
    return true;
  };
  for (const auto &[pos, v] : fixed) {
    val[pos + 1] = v;
    if (!consistent(pos + 1))
      return std::nullopt;
  }
  for (size_t i = 1; i < n; ++i) {
    if (val[i])
      continue;
    std::optional<RationalEnd> lo, hi;
    for (size_t j = 0; j < n; ++j) {
      if (j == i || !val[j])
        continue;
      Bound up = z.at(i, j), down = z.at(j, i);
      if (!up.is_inf()) {
        RationalEnd e{*val[j] + Rational(up.value()), !up.strict()};
        if (!hi || e.value < hi->value || (e.value == hi->value && !e.closed))
          hi = e;
      }
      if (!down.is_inf()) {
        RationalEnd e{*val[j] - Rational(down.value()), !down.strict()};
        if (!lo || e.value > lo->value || (e.value == lo->value && !e.closed))
          lo = e;
      }
    }
    auto v = pick(lo, hi);
    if (!v)
      return std::nullopt;
    val[i] = *v;
  }
  Valuation out;
  for (size_t i = 1; i < n; ++i)
    out.push_back(*val[i]);
  return out;
}

} // namespace

std::optional<Valuation> sample_point(const Dbm &z, const std::map<size_t, Rational> &fixed) {
  return sample_with(z, fixed, simplest_between);
}

std::optional<Valuation> sample_point_random(const Dbm &z, std::mt19937_64 &rng,
                                             const std::map<size_t, Rational> &fixed) {
  auto pick = [&rng](const std::optional<RationalEnd> &lo,
                     const std::optional<RationalEnd> &hi) -> std::optional<Rational> {
    Rational a = lo ? lo->value : Rational(0);
    Rational b = hi ? hi->value : a + Rational(3);
    bool a_closed = lo ? lo->closed : true;
    bool b_closed = hi ? hi->closed : true;
    static const long long dens[] = {1, 2, 3, 4, 6};
    std::vector<Rational> cands;
    for (long long d : dens) {
      long long p0 = floor_of(a * Rational(d)), p1 = ceil_of(b * Rational(d));
      for (long long p = p0; p <= p1 && p <= p0 + 40; ++p) {
        Rational c(p, d);
        bool ok_lo = c > a || (a_closed && c == a);
        bool ok_hi = c < b || (b_closed && c == b);
        if (ok_lo && ok_hi && std::find(cands.begin(), cands.end(), c) == cands.end())
          cands.push_back(c);
      }
    }
    if (cands.empty())
      return simplest_between(lo, hi);
    std::uniform_int_distribution<size_t> u(0, cands.size() - 1);
    return cands[u(rng)];
  };
  return sample_with(z, fixed, pick);
}

} // namespace oneata
