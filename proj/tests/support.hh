#pragma once

// Shared helpers for the test binaries: corpus access and hand-rolled
// random generators. All generators are deterministic given the engine.

#include "oneata/ata.hh"
#include "oneata/emptiness.hh"
#include "oneata/mtl.hh"
#include "oneata/text.hh"
#include "oneata/zones.hh"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#ifndef ONEATA_CORPUS_DIR
#error "ONEATA_CORPUS_DIR must be defined"
#endif

namespace oneata::testing {

using Rng = std::mt19937_64;

inline std::string corpus_path(const std::string &file) {
  return std::string(ONEATA_CORPUS_DIR) + "/" + file;
}

inline std::string slurp(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw std::runtime_error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline OneATA corpus_ata(const std::string &file) { return parse_ata(slurp(corpus_path(file))); }

/// Non-empty, non-comment lines of corpus/formulas.txt.
inline std::vector<std::string> corpus_formulas() {
  std::istringstream in(slurp(corpus_path("formulas.txt")));
  std::vector<std::string> out;
  for (std::string line; std::getline(in, line);) {
    auto b = line.find_first_not_of(" \t");
    if (b == std::string::npos || line[b] == '#')
      continue;
    out.push_back(line.substr(b));
  }
  return out;
}

inline size_t pick(Rng &g, size_t n) { return std::uniform_int_distribution<size_t>(0, n - 1)(g); }
inline bool coin(Rng &g) { return pick(g, 2) == 0; }

/// Interval with endpoints in [0, max_const] or an infinite upper end.
inline Interval random_interval(Rng &g, long long max_const) {
  for (;;) {
    long long lo = static_cast<long long>(pick(g, static_cast<size_t>(max_const) + 1));
    bool lc = coin(g);
    if (pick(g, 3) == 0)
      return Interval::make(lo, lc, std::nullopt, false);
    long long hi = lo + static_cast<long long>(pick(g, static_cast<size_t>(max_const - lo) + 1));
    bool hc = coin(g);
    if (lo == hi && !(lc && hc))
      continue;
    return Interval::make(lo, lc, hi, hc);
  }
}

inline mtl::FormulaPtr random_literal(Rng &g, const std::vector<std::string> &atoms) {
  const auto &p = atoms[pick(g, atoms.size())];
  return coin(g) ? mtl::Formula::make_atom(p) : mtl::Formula::make_negatom(p);
}

/// Random MTL formula in negation normal form.
inline mtl::FormulaPtr random_formula(Rng &g, int depth, long long max_const = 2,
                                      const std::vector<std::string> &atoms = {"a", "b"}) {
  using F = mtl::Formula;
  if (depth == 0 || pick(g, 4) == 0)
    return random_literal(g, atoms);
  switch (pick(g, 4)) {
  case 0:
    return F::make_and(random_formula(g, depth - 1, max_const, atoms),
                       random_formula(g, depth - 1, max_const, atoms));
  case 1:
    return F::make_or(random_formula(g, depth - 1, max_const, atoms),
                      random_formula(g, depth - 1, max_const, atoms));
  case 2:
    return F::make_next(random_interval(g, max_const), random_formula(g, depth - 1, max_const, atoms));
  default:
    return F::make_until(random_interval(g, max_const), random_formula(g, depth - 1, max_const, atoms),
                         random_formula(g, depth - 1, max_const, atoms));
  }
}

/// Random pure-LTL formula (all intervals universal).
inline mtl::FormulaPtr random_ltl(Rng &g, int depth, const std::vector<std::string> &atoms = {"a", "b"}) {
  using F = mtl::Formula;
  if (depth == 0 || pick(g, 3) == 0)
    return random_literal(g, atoms);
  switch (pick(g, 4)) {
  case 0:
    return F::make_and(random_ltl(g, depth - 1, atoms), random_ltl(g, depth - 1, atoms));
  case 1:
    return F::make_or(random_ltl(g, depth - 1, atoms), random_ltl(g, depth - 1, atoms));
  case 2:
    return F::make_next(Interval::all(), random_ltl(g, depth - 1, atoms));
  default:
    return F::make_until(Interval::all(), random_ltl(g, depth - 1, atoms), random_ltl(g, depth - 1, atoms));
  }
}

/// Random one-sided formula: every until has a pure-LTL left argument.
inline mtl::FormulaPtr random_one_sided(Rng &g, int depth, long long max_const = 2,
                                        const std::vector<std::string> &atoms = {"a", "b"}) {
  using F = mtl::Formula;
  if (depth == 0 || pick(g, 4) == 0)
    return random_literal(g, atoms);
  switch (pick(g, 4)) {
  case 0:
    return F::make_and(random_one_sided(g, depth - 1, max_const, atoms),
                       random_one_sided(g, depth - 1, max_const, atoms));
  case 1:
    return F::make_or(random_one_sided(g, depth - 1, max_const, atoms),
                      random_one_sided(g, depth - 1, max_const, atoms));
  case 2:
    return F::make_next(random_interval(g, max_const), random_one_sided(g, depth - 1, max_const, atoms));
  default:
    return F::make_until(random_interval(g, max_const), random_ltl(g, depth - 1, atoms),
                         random_one_sided(g, depth - 1, max_const, atoms));
  }
}

inline const std::vector<Rational> &word_delays() {
  static const std::vector<Rational> d{Rational(0), Rational(1, 2), Rational(1), Rational(3, 2),
                                       Rational(2)};
  return d;
}

inline TimedWord random_word(Rng &g, size_t max_len, const std::vector<std::string> &letters = {"a", "b"}) {
  TimedWord w(pick(g, max_len + 1));
  for (auto &e : w)
    e = TimedEvent{word_delays()[pick(g, word_delays().size())], letters[pick(g, letters.size())]};
  return w;
}

/// All words over `letters` up to length max_len with the given delays.
inline std::vector<TimedWord> all_words(size_t max_len, const std::vector<Rational> &delays,
                                        const std::vector<std::string> &letters) {
  std::vector<TimedWord> out{TimedWord{}};
  std::vector<TimedWord> layer{TimedWord{}};
  for (size_t len = 1; len <= max_len; ++len) {
    std::vector<TimedWord> next;
    for (const auto &w : layer)
      for (const auto &d : delays)
        for (const auto &a : letters) {
          auto v = w;
          v.push_back(TimedEvent{d, a});
          next.push_back(v);
        }
    out.insert(out.end(), next.begin(), next.end());
    layer = std::move(next);
  }
  return out;
}

/// Random zone over nv variables spread over `locs` locations, built from
/// up to `constraints` random difference constraints with |k| <= max_const.
inline Dbm random_zone(Rng &g, size_t nv, int locs, long long max_const, size_t constraints = 4) {
  for (;;) {
    std::vector<VarName> vars;
    std::vector<int> count(static_cast<size_t>(locs), 0);
    for (size_t i = 0; i < nv; ++i) {
      int l = static_cast<int>(pick(g, static_cast<size_t>(locs)));
      vars.push_back(VarName{l, ++count[static_cast<size_t>(l)]});
    }
    std::sort(vars.begin(), vars.end());
    Dbm z(vars);
    bool ok = true;
    size_t k = pick(g, constraints + 1);
    for (size_t t = 0; t < k && ok; ++t) {
      size_t i = pick(g, nv + 1), j = pick(g, nv + 1);
      if (i == j)
        continue;
      long long c = static_cast<long long>(pick(g, static_cast<size_t>(2 * max_const + 1))) - max_const;
      ok = z.constrain(i, j, coin(g) ? Bound::le(c) : Bound::lt(c));
    }
    if (ok)
      return z;
  }
}

/// Random node; each location is inactive with probability 1/4.
inline Node random_node(Rng &g, size_t nv, int locs, long long max_const, bool with_inactive = false) {
  Node n{random_zone(g, nv, locs, max_const), {}};
  if (with_inactive)
    for (int l = 0; l < locs; ++l)
      if (pick(g, 4) == 0)
        n.inactive.push_back(VarName{l, 0});
  return n;
}

/// Random 1-ATA with `nlocs` locations over {a, b}, constants <= max_const.
inline OneATA random_ata(Rng &g, int nlocs, long long max_const = 1) {
  OneATA a;
  a.name = "R";
  a.alphabet = {"a", "b"};
  for (int i = 0; i < nlocs; ++i)
    a.add_location("s" + std::to_string(i));
  a.initial = 0;
  for (int i = 0; i < nlocs; ++i)
    if (pick(g, 3) != 0)
      a.accepting.insert(i);
  for (int q = 0; q < nlocs; ++q)
    for (const auto &letter : a.alphabet) {
      std::vector<Clause> clauses;
      size_t nc = 1 + pick(g, 2);
      for (size_t c = 0; c < nc; ++c) {
        Clause cl;
        if (coin(g))
          cl.guard = random_interval(g, max_const);
        size_t atoms = pick(g, 3);
        for (size_t k = 0; k < atoms; ++k) {
          Loc t = static_cast<Loc>(pick(g, static_cast<size_t>(nlocs)));
          switch (pick(g, 3)) {
          case 0:
            cl.now_states.insert(t);
            break;
          case 1:
            cl.reset_states.insert(t);
            break;
          default:
            cl.deactivated_states.insert(t);
          }
        }
        clauses.push_back(cl);
      }
      std::sort(clauses.begin(), clauses.end());
      clauses.erase(std::unique(clauses.begin(), clauses.end()), clauses.end());
      a.set_transition(q, letter, clauses);
    }
  return a;
}

/// Random node reached by a random walk of up to `depth` zone-graph steps.
/// Returns the node together with a letter and target enabled from it.
struct Triple {
  Node node;
  std::string letter;
  Target target;
};

inline std::optional<Triple> random_triple(const OneATA &a, Rng &g, size_t depth) {
  Node n = initial_node(a);
  size_t steps = pick(g, depth + 1);
  for (size_t s = 0;; ++s) {
    std::vector<std::pair<std::string, Target>> enabled;
    for (const auto &letter : a.alphabet)
      for (auto &t : enumerate_targets(n, letter, a))
        if (successor(n, letter, t, a))
          enabled.emplace_back(letter, std::move(t));
    if (enabled.empty())
      return std::nullopt;
    auto &[letter, t] = enabled[pick(g, enabled.size())];
    if (s == steps)
      return Triple{n, letter, t};
    n = *successor(n, letter, t, a);
  }
}

enum class RoundTrip { Pass, Fail, Skip };

/// Clauses of t ordered like the states of `g` (a configuration of n at
/// valuation v after a delay). nullopt when two variables with different
/// clauses collapse onto one state.
inline std::optional<std::vector<Clause>> clauses_by_state(const Node &n, const Valuation &v,
                                                           const Rational &delay, const Target &t) {
  std::map<State, Clause> by_state;
  for (size_t j = 0; j < t.vars.size(); ++j) {
    const VarName &x = t.vars[j];
    State st{x.loc, std::nullopt};
    if (x.index != 0)
      st.val = v[*n.zone.index_of(x) - 1] + delay;
    auto [it, fresh] = by_state.emplace(st, t.clauses[j]);
    if (!fresh && !(it->second == t.clauses[j]))
      return std::nullopt;
  }
  std::vector<Clause> out;
  for (auto &[st, c] : by_state)
    out.push_back(c);
  return out;
}

/// Every configuration of the successor node has a predecessor in the node.
inline RoundTrip successor_sound(const Triple &tr, const OneATA &a, Rng &g) {
  auto succ = successor(tr.node, tr.letter, tr.target, a);
  if (!succ)
    return RoundTrip::Skip;
  auto vp = sample_point_random(succ->zone, g);
  if (!vp)
    return RoundTrip::Fail;
  StepLabel lab;
  lab.letter = tr.letter;
  lab.target = tr.target;
  auto pre = predecessor(PathStep{tr.node, lab}, *vp);
  if (!pre)
    return RoundTrip::Fail;
  const auto &[v, d] = *pre;
  if (!tr.node.zone.contains(v) || d < Rational(0))
    return RoundTrip::Fail;
  auto clauses = clauses_by_state(tr.node, v, d, tr.target);
  if (!clauses)
    return RoundTrip::Skip;
  auto elapsed = time_elapse_config(configuration_of(tr.node, v), d);
  if (clauses->size() != elapsed.size())
    return RoundTrip::Skip;
  auto next = apply_combination(elapsed, *clauses);
  return next && *next == configuration_of(*succ, *vp) ? RoundTrip::Pass : RoundTrip::Fail;
}

/// Every concrete step from a configuration of the node lands in the successor.
inline RoundTrip successor_complete(const Triple &tr, const OneATA &a, Rng &g) {
  auto v = sample_point_random(tr.node.zone, g);
  if (!v)
    return RoundTrip::Fail;
  Rational d = word_delays()[pick(g, word_delays().size())];
  if (coin(g))
    d += Rational(static_cast<long long>(pick(g, 7)) + 1, 8);
  auto clauses = clauses_by_state(tr.node, *v, d, tr.target);
  if (!clauses)
    return RoundTrip::Skip;
  auto elapsed = time_elapse_config(configuration_of(tr.node, *v), d);
  if (clauses->size() != elapsed.size())
    return RoundTrip::Skip;
  auto next = apply_combination(elapsed, *clauses);
  if (!next)
    return RoundTrip::Skip;
  auto succ = successor(tr.node, tr.letter, tr.target, a);
  return succ && node_satisfies(*next, *succ) ? RoundTrip::Pass : RoundTrip::Fail;
}

class Stopwatch {
public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

} // namespace oneata::testing
