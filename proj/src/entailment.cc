#include "oneata/entailment.hh"

#include <algorithm>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>

namespace oneata {

// ---------------------------------------------------------------- ZoneUnion

void ZoneUnion::add(Dbm z) {
  for (const auto &m : zones_)
    if (m.includes(z))
      return;
  std::erase_if(zones_, [&](const Dbm &m) { return z.includes(m); });
  zones_.push_back(std::move(z));
}

ZoneUnion ZoneUnion::intersect(const ZoneUnion &other) const {
  ZoneUnion r;
  for (const auto &a : zones_)
    for (const auto &b : other.zones_)
      if (auto c = a.intersect(b))
        r.add(std::move(*c));
  return r;
}

bool ZoneUnion::contains(const Valuation &v) const {
  return std::any_of(zones_.begin(), zones_.end(), [&](const Dbm &z) { return z.contains(v); });
}

// ------------------------------------------------------- configuration level

namespace {

struct StateClass {
  bool bottom;
  bool above;
  long long floor;
  bool integral;
  Rational frac;
};

StateClass classify(const State &s, long long M) {
  if (!s.val)
    return {true, false, 0, false, 0};
  const Rational &v = *s.val;
  if (v > Rational(M))
    return {false, true, 0, false, 0};
  return {false, false, floor_of(v), is_integer(v), fract(v)};
}

bool same_class(const StateClass &a, const StateClass &b) {
  if (a.bottom || b.bottom)
    return a.bottom == b.bottom;
  if (a.above || b.above)
    return a.above == b.above;
  return a.floor == b.floor && a.integral == b.integral;
}

bool bounded(const StateClass &c) { return !c.bottom && !c.above; }

// Injective matching of g1 into g2 respecting Def. of region equivalence.
bool match_states(const Configuration &g1, const Configuration &g2, long long M) {
  std::vector<State> s1(g1.begin(), g1.end()), s2(g2.begin(), g2.end());
  if (s1.size() > s2.size())
    return false;
  std::vector<StateClass> c1, c2;
  for (const auto &s : s1)
    c1.push_back(classify(s, M));
  for (const auto &s : s2)
    c2.push_back(classify(s, M));
  std::vector<int> image(s1.size(), -1);
  std::vector<bool> used(s2.size(), false);
  std::function<bool(size_t)> go = [&](size_t i) {
    if (i == s1.size())
      return true;
    for (size_t j = 0; j < s2.size(); ++j) {
      if (used[j] || s1[i].loc != s2[j].loc || !same_class(c1[i], c2[j]))
        continue;
      bool ok = true;
      if (bounded(c1[i]))
        for (size_t k = 0; k < i && ok; ++k) {
          if (!bounded(c1[k]))
            continue;
          const auto &f1 = c1[i].frac, &g1f = c1[k].frac;
          const auto &f2 = c2[j].frac, &g2f = c2[image[k]].frac;
          ok = ((f1 <= g1f) == (f2 <= g2f)) && ((g1f <= f1) == (g2f <= f2));
        }
      if (!ok)
        continue;
      used[j] = true;
      image[i] = static_cast<int>(j);
      if (go(i + 1))
        return true;
      used[j] = false;
    }
    image[i] = -1;
    return false;
  };
  return go(0);
}

} // namespace

bool region_equivalent(const Configuration &g1, const Configuration &g2, long long M) {
  return g1.size() == g2.size() && match_states(g1, g2, M);
}

bool config_entails(const Configuration &g1, const Configuration &g2, long long M) {
  return match_states(g1, g2, M);
}

// ------------------------------------------------------------------- N_r

namespace {

Bound negate(Bound c) { return c.strict() ? Bound::le(-c.value()) : Bound::lt(-c.value()); }

// N'_r for the mapping source index i -> target[i] (target[0] = 0): the part
// of z2 whose image under r has no region-equivalent valuation in z1.
ZoneUnion nr_lifted(const Dbm &z1, const Dbm &z2, const std::vector<size_t> &target, long long M) {
  ZoneUnion out;
  size_t n = z1.dim();
  auto try_add = [&](auto &&build) {
    Dbm d = z2;
    if (build(d))
      out.add(std::move(d));
  };
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) {
      if (i == j)
        continue;
      Bound c = z1.at(i, j);
      if (c.is_inf())
        continue;
      size_t ti = target[i], tj = target[j];
      // Both bounded by M: region equivalence preserves x_i - x_j <| c exactly.
      try_add([&](Dbm &d) {
        if (!d.constrain(tj, ti, negate(c)))
          return false;
        if (i > 0 && !d.constrain(ti, 0, Bound::le(M)))
          return false;
        return j == 0 || d.constrain(tj, 0, Bound::le(M));
      });
      // x_i above M: the region bound on x_j - x_i is (<, ceil(x_j) - M).
      if (i > 0)
        try_add([&](Dbm &d) {
          if (!d.constrain(0, ti, Bound::lt(-M)))
            return false;
          if (j == 0)
            return c.value() <= M;
          return d.constrain(tj, 0, Bound::le(std::min(M, M - c.value())));
        });
    }
  return out;
}

bool inactive_included(const Node &n1, const Node &n2) {
  return std::includes(n2.inactive.begin(), n2.inactive.end(), n1.inactive.begin(),
                       n1.inactive.end());
}

// Over-approximation of all valuations region equivalent to a point of p1,
// after restricting p1 to the variables whose targets stay below M.
std::optional<Dbm> relaxed(Dbm p1, const Dbm &p2, long long M) {
  size_t n = p1.dim();
  for (size_t k = 1; k < n; ++k)
    if (p2.at(k, 0) <= Bound::le(M) && !p1.constrain(k, 0, Bound::le(M)))
      return std::nullopt;
  std::vector<bool> small(n, true);
  for (size_t k = 1; k < n; ++k)
    small[k] = p1.at(k, 0) <= Bound::le(M);
  Dbm r = p1;
  for (size_t k = 1; k < n; ++k) {
    if (!small[k])
      r.set(k, 0, Bound::inf());
    r.set(0, k, std::max(p1.at(0, k), Bound::lt(-M)));
    for (size_t l = 1; l < n; ++l) {
      if (l == k)
        continue;
      if (!small[k])
        r.set(k, l, Bound::inf());
      else if (!small[l])
        r.set(k, l, std::max(p1.at(k, l), Bound::lt(0)));
    }
  }
  return r;
}

} // namespace

ZoneUnion compute_Nr(const Dbm &zr, const Dbm &zr_prime, long long M) {
  if (zr.dim() != zr_prime.dim())
    throw std::invalid_argument("compute_Nr: dimension mismatch");
  std::vector<size_t> target(zr.dim());
  for (size_t i = 0; i < target.size(); ++i)
    target[i] = i;
  return nr_lifted(zr, zr_prime, target, M);
}

EntailResult node_entails_ex(const Node &n1, const Node &n2, long long M) {
  EntailResult res;
  if (!inactive_included(n1, n2))
    return res;
  if (n1.zone.size() == 0) {
    res.entails = true;
    return res;
  }
  const Dbm &z1 = n1.zone, &z2 = n2.zone;

  // Sources with the largest lower bounds first: they constrain the most.
  std::vector<size_t> order;
  for (size_t i = 1; i < z1.dim(); ++i)
    order.push_back(i);
  std::stable_sort(order.begin(), order.end(),
                   [&](size_t a, size_t b) { return z1.at(0, a) < z1.at(0, b); });

  ZoneUnion U(z2);
  std::vector<size_t> target(z1.dim(), 0);
  std::vector<bool> used(z2.dim(), false);
  std::vector<size_t> src, tgt;

  std::function<bool(size_t)> go = [&](size_t depth) {
    if (depth == order.size()) {
      ++res.leaves;
      U = U.intersect(nr_lifted(z1, z2, target, M));
      return U.empty();
    }
    size_t i = order[depth];
    for (size_t t = 1; t < z2.dim(); ++t) {
      if (used[t] || z2.vars()[t - 1].loc != z1.vars()[i - 1].loc)
        continue;
      src.push_back(i);
      tgt.push_back(t);
      auto r = relaxed(z1.project(src), z2.project(tgt), M);
      bool feasible = r && z2.project(tgt).intersect(*r).has_value();
      if (feasible) {
        used[t] = true;
        target[i] = t;
        if (go(depth + 1))
          return true;
        used[t] = false;
      }
      src.pop_back();
      tgt.pop_back();
    }
    return false;
  };

  if (go(0)) {
    res.entails = true;
    return res;
  }
  res.entails = U.empty();
  if (!res.entails)
    res.witness = sample_point(U.zones().front());
  return res;
}

bool node_entails(const Node &n1, const Node &n2, long long M) {
  return node_entails_ex(n1, n2, M).entails;
}

bool node_entails_bounded(const Node &n1, const Node &n2, long long M) {
  if (!inactive_included(n1, n2))
    return false;
  auto v1 = n1.zone.vars(), v2 = n2.zone.vars();
  std::sort(v1.begin(), v1.end());
  std::sort(v2.begin(), v2.end());
  if (v1 != v2)
    return false;
  std::vector<size_t> target(n1.zone.dim(), 0);
  for (size_t i = 1; i < target.size(); ++i)
    target[i] = *n2.zone.index_of(n1.zone.vars()[i - 1]);
  return nr_lifted(n1.zone, n2.zone, target, M).empty();
}

// ------------------------------------------------------------ region oracle

namespace {

// Class c of a variable: 2k is the point k, 2k+1 the open interval (k,k+1),
// 2M+1 everything above M.
struct RegionEnum {
  const Dbm &zone;
  long long M;
  std::vector<int> cls;
  std::vector<int> rank; // fractional rank of open variables

  bool above(size_t v) const { return cls[v] == 2 * M + 1; }
  bool open(size_t v) const { return !above(v) && cls[v] % 2 == 1; }

  Dbm box() const {
    Dbm d(zone.vars());
    for (size_t v = 0; v < cls.size(); ++v) {
      size_t i = v + 1;
      long long k = cls[v] / 2;
      if (above(v))
        d.set(0, i, Bound::lt(-M));
      else if (open(v)) {
        d.set(0, i, Bound::lt(-k));
        d.set(i, 0, Bound::lt(k + 1));
      } else {
        d.set(0, i, Bound::le(-k));
        d.set(i, 0, Bound::le(k));
      }
    }
    return d;
  }

  Dbm region(int ranks) const {
    Dbm d = box();
    std::vector<std::optional<Rational>> val(cls.size() + 1);
    val[0] = Rational(0);
    for (size_t v = 0; v < cls.size(); ++v) {
      if (above(v))
        continue;
      Rational x(cls[v] / 2);
      if (open(v))
        x += Rational(rank[v] + 1, ranks + 1);
      val[v + 1] = x;
    }
    for (size_t i = 0; i < val.size(); ++i)
      for (size_t j = 0; j < val.size(); ++j) {
        if (i == j || !val[i] || !val[j])
          continue;
        Rational diff = *val[i] - *val[j];
        if (is_integer(diff))
          d.set(i, j, Bound::le(floor_of(diff)));
        else
          d.set(i, j, Bound::lt(ceil_of(diff)));
      }
    d.canonicalize();
    return d;
  }
};

void for_each_region(const Dbm &zone, long long M, const std::function<bool(const Dbm &)> &visit) {
  size_t n = zone.size();
  RegionEnum e{zone, M, std::vector<int>(n, 0), std::vector<int>(n, 0)};
  int classes = static_cast<int>(2 * M + 2);
  bool stop = false;
  std::function<void(size_t)> classes_rec = [&](size_t v) {
    if (stop)
      return;
    if (v < n) {
      for (int c = 0; c < classes && !stop; ++c) {
        e.cls[v] = c;
        classes_rec(v + 1);
      }
      return;
    }
    if (!zone.intersect(e.box()))
      return;
    std::vector<size_t> opens;
    for (size_t k = 0; k < n; ++k)
      if (e.open(k))
        e.rank[k] = 0, opens.push_back(k);
    // Surjections of the open variables onto 0..T-1 (ordered partitions).
    size_t p = opens.size();
    std::vector<int> r(p, 0);
    while (!stop) {
      int top = -1;
      for (int x : r)
        top = std::max(top, x);
      std::vector<bool> hit(static_cast<size_t>(top + 1), false);
      for (int x : r)
        hit[static_cast<size_t>(x)] = true;
      if (std::all_of(hit.begin(), hit.end(), [](bool b) { return b; })) {
        for (size_t a = 0; a < p; ++a)
          e.rank[opens[a]] = r[a];
        Dbm reg = e.region(top + 1);
        if (zone.intersect(reg) && !visit(reg))
          stop = true;
      }
      size_t a = 0;
      while (a < p && r[a] == static_cast<int>(p) - 1)
        r[a++] = 0;
      if (a == p)
        break;
      ++r[a];
    }
  };
  classes_rec(0);
}

std::vector<std::vector<size_t>> all_injections(const Dbm &z1, const Dbm &z2) {
  std::vector<std::vector<size_t>> out;
  std::vector<size_t> cur;
  std::vector<bool> used(z2.dim(), false);
  std::function<void(size_t)> go = [&](size_t i) {
    if (i == z1.dim()) {
      out.push_back(cur);
      return;
    }
    for (size_t t = 1; t < z2.dim(); ++t) {
      if (used[t] || z2.vars()[t - 1].loc != z1.vars()[i - 1].loc)
        continue;
      used[t] = true;
      cur.push_back(t);
      go(i + 1);
      cur.pop_back();
      used[t] = false;
    }
  };
  go(1);
  return out;
}

} // namespace

bool brute_force_node_entails(const Node &n1, const Node &n2, long long M) {
  if (!inactive_included(n1, n2))
    return false;
  if (n1.zone.size() == 0)
    return true;
  auto injections = all_injections(n1.zone, n2.zone);
  bool entails = true;
  for_each_region(n2.zone, M, [&](const Dbm &reg) {
    for (const auto &inj : injections) {
      Dbm proj = reg.project(inj).renamed(n1.zone.vars());
      if (n1.zone.intersect(proj))
        return true;
    }
    entails = false;
    return false;
  });
  return entails;
}

// ------------------------------------------------------------------ CNF

Cnf parse_cnf(const std::string &text) {
  Cnf f;
  std::istringstream in(text);
  std::string line;
  std::vector<int> cur;
  int lineno = 0;
  std::optional<int> declared;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok) || tok == "c" || tok[0] == '#')
      continue;
    if (tok == "p") {
      std::string kind;
      int v = 0, c = 0;
      if (!(ls >> kind >> v >> c) || kind != "cnf")
        throw std::invalid_argument("line " + std::to_string(lineno) + ": bad header");
      f.num_vars = v;
      declared = v;
      continue;
    }
    do {
      int lit = 0;
      try {
        size_t used = 0;
        lit = std::stoi(tok, &used);
        if (used != tok.size())
          throw std::invalid_argument(tok);
      } catch (const std::exception &) {
        throw std::invalid_argument("line " + std::to_string(lineno) + ": bad literal '" + tok + "'");
      }
      if (lit == 0) {
        if (cur.size() != 3)
          throw std::invalid_argument("line " + std::to_string(lineno) +
                                      ": clause must have exactly 3 literals");
        f.clauses.push_back({cur[0], cur[1], cur[2]});
        cur.clear();
      } else {
        if (declared && std::abs(lit) > *declared)
          throw std::invalid_argument("line " + std::to_string(lineno) + ": variable " +
                                      std::to_string(std::abs(lit)) + " exceeds the header");
        cur.push_back(lit);
        f.num_vars = std::max(f.num_vars, std::abs(lit));
      }
    } while (ls >> tok);
  }
  if (!cur.empty())
    throw std::invalid_argument("unterminated clause");
  return f;
}

std::string print_cnf(const Cnf &f) {
  std::ostringstream os;
  os << "p cnf " << f.num_vars << ' ' << f.clauses.size() << '\n';
  for (const auto &c : f.clauses)
    os << c[0] << ' ' << c[1] << ' ' << c[2] << " 0\n";
  return os.str();
}

bool is_monotone(const Cnf &f) {
  return std::all_of(f.clauses.begin(), f.clauses.end(), [](const std::array<int, 3> &c) {
    bool pos = c[0] > 0;
    return std::all_of(c.begin(), c.end(), [&](int l) { return (l > 0) == pos; });
  });
}

bool brute_force_sat(const Cnf &f) {
  for (unsigned long long a = 0; a < (1ULL << f.num_vars); ++a) {
    bool all = std::all_of(f.clauses.begin(), f.clauses.end(), [&](const std::array<int, 3> &c) {
      return std::any_of(c.begin(), c.end(), [&](int l) {
        bool v = (a >> (std::abs(l) - 1)) & 1;
        return l > 0 ? v : !v;
      });
    });
    if (all)
      return true;
  }
  return false;
}

// ------------------------------------------------------- hardness instance

namespace {

// lo <| x_a - x_b <| hi, with nullopt for no bound.
void diff(Dbm &d, size_t a, size_t b, std::optional<Bound> lo, std::optional<Bound> hi) {
  bool ok = true;
  if (hi)
    ok = d.constrain(a, b, *hi);
  if (lo && ok)
    ok = d.constrain(b, a, *lo);
  if (!ok)
    throw std::logic_error("hardness construction produced an empty zone");
}

} // namespace

HardnessInstance gen_hardness_instance(const Cnf &input) {
  if (!is_monotone(input))
    throw std::invalid_argument("formula is not monotone");
  HardnessInstance h;
  h.formula = input;
  std::stable_partition(h.formula.clauses.begin(), h.formula.clauses.end(),
                        [](const std::array<int, 3> &c) { return c[0] > 0; });
  const auto &cl = h.formula.clauses;
  long long m = static_cast<long long>(cl.size());
  long long k = std::count_if(cl.begin(), cl.end(), [](const auto &c) { return c[0] > 0; });
  h.m_const = 14 * (m + 2);
  h.names.locs = {"qx", "qy"};
  const Loc qx = 0, qy = 1;
  auto le = [](long long v) { return Bound::le(v); };
  auto lt = [](long long v) { return Bound::lt(v); };

  // Z_phi: x+_j at (qx, j), x-_j at (qx, 3+j); same for y at qy.
  std::vector<VarName> zv;
  for (Loc l : {qx, qy})
    for (int i = 1; i <= 6; ++i)
      zv.push_back(VarName{l, i});
  Dbm z(zv);
  auto X = [](int sign, int j) -> size_t { return static_cast<size_t>(sign > 0 ? j : 3 + j); };
  auto Y = [](int sign, int j) -> size_t { return static_cast<size_t>(6 + (sign > 0 ? j : 3 + j)); };
  for (int j = 1; j <= 3; ++j) {
    diff(z, Y(1, j), X(1, j), le(0), le(1));
    diff(z, Y(-1, j), X(-1, j), lt(-1), le(2));
  }
  for (int s : {1, -1})
    for (int j = 1; j <= 2; ++j)
      diff(z, X(s, j + 1), Y(s, j), le(-1), le(5));
  diff(z, Y(1, 3), 0, std::nullopt, lt(14 * (k + 1) - 2));
  diff(z, X(-1, 1), 0, lt(-(14 * (k + 1) - 2)), std::nullopt);
  diff(z, Y(-1, 3), X(1, 1), std::nullopt, lt(14 * (m + 2) - 6));
  h.z = Node{z, {}};

  // Z'_phi: per location px_1..3, then clause variables, then nx_1..3.
  size_t per_loc = static_cast<size_t>(3 * m + 6);
  std::vector<VarName> zpv;
  for (Loc l : {qx, qy})
    for (size_t i = 1; i <= per_loc; ++i)
      zpv.push_back(VarName{l, static_cast<int>(i)});
  Dbm zp(zpv);
  auto px = [](int j) -> size_t { return static_cast<size_t>(j); };
  auto cx = [](long long i, int j) -> size_t { return static_cast<size_t>(3 + 3 * (i - 1) + j); };
  auto nx = [&](int j) -> size_t { return static_cast<size_t>(3 + 3 * m + j); };
  auto toy = [&](size_t xi) { return xi + per_loc; };
  for (int j = 1; j <= 3; ++j) {
    long long p = 3 * (j - 1), q = 14 * (m + 1) + 3 * (j - 1);
    diff(zp, px(j), 0, le(-p), le(p));
    diff(zp, toy(px(j)), 0, le(-p), le(p));
    diff(zp, nx(j), 0, le(-q), le(q));
    diff(zp, toy(nx(j)), 0, le(-(q + 2)), le(q + 2));
  }
  for (long long i = 1; i <= m; ++i)
    for (int j = 1; j <= 3; ++j) {
      long long base = 14 * i + 3 * (j - 1);
      diff(zp, cx(i, j), 0, le(-base), le(base + 2));
      diff(zp, toy(cx(i, j)), 0, le(-base), le(base + 2));
      diff(zp, toy(cx(i, j)), cx(i, j), le(0), std::nullopt);
    }
  for (long long i = 1; i <= m; ++i)
    for (int j = 1; j <= 3; ++j)
      for (long long i2 = 1; i2 <= m; ++i2)
        for (int j2 = 1; j2 <= 3; ++j2) {
          if (std::make_pair(i2, j2) <= std::make_pair(i, j))
            continue;
          if (std::abs(cl[i - 1][j - 1]) != std::abs(cl[i2 - 1][j2 - 1]))
            continue;
          long long d = 14 * (i2 - i) + 3 * (j2 - j);
          diff(zp, cx(i2, j2), cx(i, j), le(-d), le(d));
          diff(zp, toy(cx(i2, j2)), toy(cx(i, j)), le(-d), le(d));
        }
  h.z_prime = Node{zp, {}};
  return h;
}

} // namespace oneata
