#include "doctest.h"
#include "support.hh"

#include "oneata/entailment.hh"
#include "oneata/product.hh"

using namespace oneata;
using namespace oneata::testing;

namespace {

Configuration random_config(Rng &g, int locs, size_t max_states) {
  Configuration c;
  size_t n = 1 + pick(g, max_states);
  for (size_t i = 0; i < n; ++i) {
    State s{static_cast<Loc>(pick(g, static_cast<size_t>(locs))), std::nullopt};
    if (pick(g, 5) != 0)
      s.val = Rational(static_cast<long long>(pick(g, 13)), 4);
    c.insert(s);
  }
  return c;
}

// Same integral parts, fractional parts moved by a random order-preserving
// map of (0,1); the result is region-equivalent to c for every bound.
Configuration perturb(Rng &g, const Configuration &c) {
  std::set<long long> picks;
  while (picks.size() < 3)
    picks.insert(1 + static_cast<long long>(pick(g, 15)));
  std::vector<long long> fr(picks.begin(), picks.end());
  Configuration out;
  for (auto s : c) {
    if (s.val) {
      long long q = s.val->numerator() * 4 / s.val->denominator();
      long long k = q / 4 * 4, r = q - k;
      *s.val = Rational(k, 4) + (r == 0 ? Rational(0) : Rational(fr[static_cast<size_t>(r - 1)], 16));
    }
    out.insert(s);
  }
  return out;
}

// Candidate delays fine enough to realise any region successor of
// configurations with quarter-valued clocks.
std::vector<Rational> delay_grid(long long M) {
  std::vector<Rational> d;
  for (long long k = 0; k <= 32 * (M + 2); ++k)
    d.push_back(Rational(k, 32));
  return d;
}

} // namespace

TEST_CASE("region equivalence is an equivalence relation") {
  Rng g(1);
  for (int i = 0; i < 400; ++i) {
    long long M = static_cast<long long>(pick(g, 3));
    auto a = random_config(g, 2, 3), b = random_config(g, 2, 3), c = random_config(g, 2, 3);
    CHECK(region_equivalent(a, a, M));
    CHECK(region_equivalent(a, b, M) == region_equivalent(b, a, M));
    if (region_equivalent(a, b, M) && region_equivalent(b, c, M))
      CHECK(region_equivalent(a, c, M));
    // shifting every clock by the same amount within one region keeps the class
    CHECK(region_equivalent(a, time_elapse_config(a, Rational(0)), M));
  }
}

TEST_CASE("region equivalence is a bisimulation") {
  Rng g(2);
  auto a1 = corpus_ata("a1.ata");
  auto a2 = corpus_ata("a2.ata");
  int checked = 0;
  for (int i = 0; i < 300; ++i) {
    const OneATA &a = coin(g) ? a1 : a2;
    long long M = max_constant(a);
    auto c1 = random_config(g, static_cast<int>(a.locations.size()), 3);
    auto c2 = coin(g) ? perturb(g, c1) : random_config(g, static_cast<int>(a.locations.size()), 3);
    if (!region_equivalent(c1, c2, M))
      continue;
    ++checked;
    Rational d1 = Rational(static_cast<long long>(pick(g, 12)), 8);
    auto e1 = time_elapse_config(c1, d1);
    bool matched = false;
    for (const auto &d2 : delay_grid(M))
      if (region_equivalent(e1, time_elapse_config(c2, d2), M)) {
        matched = true;
        break;
      }
    CHECK(matched);
    for (const auto &letter : a.alphabet) {
      auto s1 = discrete_successors(a, c1, letter);
      auto s2 = discrete_successors(a, c2, letter);
      for (const auto &x : s1) {
        bool found = false;
        for (const auto &y : s2)
          found = found || region_equivalent(x.result, y.result, M);
        CHECK(found);
      }
    }
    CHECK(is_accepting(a, c1) == is_accepting(a, c2));
  }
  CHECK(checked > 100);
}

TEST_CASE("configuration entailment is preserved downwards") {
  // if c1 is region-equivalent to a subset of c2 and c2 accepts a word, so does c1
  Rng g(3);
  auto a1 = corpus_ata("a1.ata");
  auto words = all_words(2, {Rational(0), Rational(1, 2), Rational(1)}, {"a"});
  auto accepts_from = [&](const Configuration &c, const TimedWord &w) {
    std::set<Configuration> cur{c};
    for (const auto &e : w) {
      std::set<Configuration> next;
      for (const auto &x : cur)
        for (auto &s : discrete_successors(a1, time_elapse_config(x, e.delay), e.letter))
          next.insert(s.result);
      cur = std::move(next);
    }
    return std::any_of(cur.begin(), cur.end(), [&](const Configuration &x) { return is_accepting(a1, x); });
  };
  int checked = 0;
  for (int i = 0; i < 300 && checked < 60; ++i) {
    auto c2 = random_config(g, 3, 3);
    Configuration c1;
    for (const auto &s : c2)
      if (coin(g))
        c1.insert(s);
    REQUIRE(config_entails(c1, c2, 1));
    ++checked;
    for (const auto &w : words)
      if (accepts_from(c2, w))
        CHECK(accepts_from(c1, w));
  }
}

TEST_CASE("bounded entailment implies entailment") {
  Rng g(4);
  int positive = 0;
  for (int i = 0; i < 300; ++i) {
    Dbm z1 = random_zone(g, 1 + pick(g, 3), 2, 3);
    Dbm z2 = random_zone(g, z1.size(), 2, 3);
    z2 = z2.renamed(z1.vars());
    if (!z2.canonicalize())
      continue;
    Node n1{z1, {}}, n2{z2, {}};
    long long M = static_cast<long long>(pick(g, 4));
    if (node_entails_bounded(n1, n2, M)) {
      ++positive;
      CHECK(node_entails(n1, n2, M));
    }
  }
  CHECK(positive > 10);
}

TEST_CASE("node entailment is a preorder") {
  Rng g(5);
  for (int i = 0; i < 150; ++i) {
    long long M = static_cast<long long>(pick(g, 3));
    Node a = random_node(g, 1 + pick(g, 2), 2, 2, true);
    Node b = random_node(g, 1 + pick(g, 2), 2, 2, true);
    Node c = random_node(g, 1 + pick(g, 3), 2, 2, true);
    CHECK(node_entails(a, a, M));
    if (node_entails(a, b, M) && node_entails(b, c, M))
      CHECK(node_entails(a, c, M));
  }
}

TEST_CASE("compound entailment is a preorder on product nodes") {
  auto ta = parse_ta(slurp(corpus_path("two_a_one_apart.ta")));
  auto a1 = corpus_ata("a1.ata");
  ExploreConfig cfg;
  cfg.pruning = Pruning::None;
  cfg.max_nodes = 40;
  cfg.stop_at_accepting = false;
  auto r = model_check(ta, a1, cfg);
  const auto &nodes = r.graph.nodes;
  REQUIRE(nodes.size() > 5);
  long long M = 1;
  for (const auto &x : nodes) {
    CHECK(compound_entails(x, x, M));
    for (const auto &y : nodes)
      if (compound_entails(x, y, M))
        for (const auto &z : nodes)
          if (compound_entails(y, z, M))
            CHECK(compound_entails(x, z, M));
  }
}

TEST_CASE("successor soundness and completeness") {
  Rng g(6);
  std::vector<OneATA> automata{corpus_ata("a1.ata"), corpus_ata("a2.ata")};
  for (const auto &s : corpus_formulas())
    automata.push_back(mtl::translate(*mtl::parse(s)).automaton);
  int pass = 0;
  for (int i = 0; i < 150; ++i) {
    const auto &a = automata[pick(g, automata.size())];
    auto tr = random_triple(a, g, 4);
    if (!tr)
      continue;
    auto s = successor_sound(*tr, a, g);
    auto c = successor_complete(*tr, a, g);
    CHECK(s != RoundTrip::Fail);
    CHECK(c != RoundTrip::Fail);
    pass += s == RoundTrip::Pass && c == RoundTrip::Pass;
  }
  CHECK(pass > 50);
}

TEST_CASE("pruning modes agree on verdicts") {
  Rng g(7);
  std::vector<std::string> formulas = corpus_formulas();
  for (int i = 0; i < 25; ++i)
    formulas.push_back(mtl::to_string(*random_one_sided(g, 3)));
  for (const auto &s : formulas) {
    auto f = mtl::parse(s);
    auto tr = mtl::translate(*f, {"a", "b", "c"});
    ExploreConfig full, bounded, none;
    full.pruning = Pruning::Full;
    bounded.pruning = Pruning::Bounded;
    none.pruning = Pruning::None;
    none.max_nodes = 3000;
    auto rf = explore(tr.automaton, full);
    auto rb = explore(tr.automaton, bounded);
    auto rn = explore(tr.automaton, none);
    CHECK_MESSAGE(rf.verdict.kind == rb.verdict.kind, s);
    if (rn.verdict.kind != VerdictKind::Inconclusive)
      CHECK_MESSAGE(rf.verdict.kind == rn.verdict.kind, s);
    if (rf.verdict.kind == VerdictKind::NonEmpty)
      CHECK(mtl::satisfies(rf.verdict.witness, *f));
  }
}

TEST_CASE("emptiness agrees with bounded word enumeration") {
  Rng g(8);
  auto words = all_words(3, {Rational(0), Rational(1, 2), Rational(1), Rational(3, 2)}, {"a", "b"});
  int nonempty = 0, empty = 0;
  for (int i = 0; i < 60; ++i) {
    auto a = random_ata(g, 1 + static_cast<int>(pick(g, 3)));
    ExploreConfig cfg;
    cfg.max_nodes = 2000;
    auto r = explore(a, cfg);
    bool some = std::any_of(words.begin(), words.end(), [&](const TimedWord &w) { return accepts(a, w); });
    if (r.verdict.kind == VerdictKind::NonEmpty) {
      ++nonempty;
      CHECK(accepts(a, r.verdict.witness));
    } else if (r.verdict.kind == VerdictKind::Empty) {
      ++empty;
      CHECK_MESSAGE(!some, print_ata(a));
    }
  }
  CHECK(nonempty > 5);
  CHECK(empty > 0);
}

TEST_CASE("text formats round trip") {
  Rng g(9);
  for (int i = 0; i < 200; ++i) {
    auto f = random_formula(g, 3);
    CHECK(mtl::equal(*mtl::parse(mtl::to_string(*f)), *f));
    auto w = random_word(g, 4);
    CHECK(parse_timed_word(to_string(w)) == w);
  }
  for (int i = 0; i < 60; ++i) {
    auto a = random_ata(g, 1 + static_cast<int>(pick(g, 3)));
    CHECK(parse_ata(print_ata(a)) == a);
    Naming nm{{"p", "q"}, {}};
    Node n = random_node(g, 1 + pick(g, 4), 2, 4, true);
    Naming back = nm;
    CHECK(parse_node(dump_node(n, nm), back) == n);
  }
  for (const auto &s : corpus_formulas()) {
    auto tr = mtl::translate(*mtl::parse(s));
    CHECK(parse_ata(print_ata(tr.automaton)) == tr.automaton);
  }
  auto ta = parse_ta(slurp(corpus_path("spaced.ta")));
  CHECK(print_ta(parse_ta(print_ta(ta))) == print_ta(ta));
}
