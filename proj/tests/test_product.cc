#include "doctest.h"
#include "support.hh"

#include "oneata/product.hh"

using namespace oneata;
using namespace oneata::testing;

namespace {

TimedAutomaton corpus_ta(const std::string &file) { return parse_ta(slurp(corpus_path(file))); }

} // namespace

TEST_CASE("timed automaton format") {
  auto ta = corpus_ta("two_a_one_apart.ta");
  CHECK(ta.name == "TwoApart");
  CHECK(ta.locations.size() == 3);
  auto loc = [&](const std::string &n) {
    return static_cast<int>(std::find(ta.locations.begin(), ta.locations.end(), n) - ta.locations.begin());
  };
  CHECK(ta.initial == loc("p0"));
  CHECK(ta.clocks == std::vector<std::string>{"y"});
  CHECK(ta.edges.size() == 5);
  CHECK(ta.max_constant() == 1);
  CHECK(ta.accepting == std::set<int>{loc("p2")});
  const auto &e = ta.edges[3];
  REQUIRE(e.guard.size() == 1);
  CHECK(e.guard[0].second == Interval::point(1));
  CHECK(ta.edges[1].resets == std::vector<int>{0});
  for (const char *f : {"two_a_one_apart.ta", "one_loop.ta", "spaced.ta"}) {
    auto t = corpus_ta(f);
    CHECK(parse_ta(print_ta(t)) == t);
  }
}

TEST_CASE("timed automaton errors") {
  auto bad = [](const std::string &text) {
    try {
      parse_ta(text);
      return std::string();
    } catch (const std::invalid_argument &e) {
      return std::string(e.what());
    }
  };
  CHECK(bad("ta T; clocks y; init p; accepting p;\np -a-> p [z in [0,1]];\n").find("line 2") != std::string::npos);
  CHECK(bad("ta T; clocks; init p; accepting p;\np -a-> p {reset y};\n").find("y") != std::string::npos);
  CHECK_FALSE(bad("ta T; clocks; init p; accepting p;\np -a- p;\n").empty());
  CHECK_FALSE(bad("ta T; alphabet a; clocks; init p; accepting p;\np -b-> p;\n").empty());
  auto inferred = parse_ta("ta T; clocks; init p; accepting p;\np -b-> p;\np -a-> p;\n");
  CHECK(inferred.alphabet == std::vector<std::string>{"a", "b"});
}

TEST_CASE("explicit timed automaton runs") {
  auto ta = corpus_ta("two_a_one_apart.ta");
  CHECK(ta_accepts(ta, parse_timed_word("(0,a)(1,a)")));
  CHECK(ta_accepts(ta, parse_timed_word("(0.5,a)(0.3,a)(0.7,a)")));
  CHECK_FALSE(ta_accepts(ta, parse_timed_word("(0,a)(0.5,a)(0.7,a)")));
  CHECK_FALSE(ta_accepts(ta, parse_timed_word("")));
  auto sp = corpus_ta("spaced.ta");
  CHECK(ta_accepts(sp, parse_timed_word("(0,a)(2,a)")));
  CHECK_FALSE(ta_accepts(sp, parse_timed_word("(0,a)(1,a)")));
  auto triv = trivial_ta({"a", "b"});
  CHECK(ta_accepts(triv, parse_timed_word("")));
  CHECK(ta_accepts(triv, parse_timed_word("(3,b)(0,a)")));
}

TEST_CASE("compound nodes") {
  auto ta = corpus_ta("two_a_one_apart.ta");
  auto a1 = corpus_ata("a1.ata");
  auto n = initial_compound(ta, a1);
  CHECK(n.ta_loc == 0);
  CHECK(n.node.zone.size() == 2);
  CHECK(n.node.zone.index_of(clock_var(0)));
  CHECK(compound_entails(n, n, 1));
  CHECK_FALSE(is_accepting_compound(n, ta, a1));
  auto t = enumerate_targets(n.node, "a", a1);
  REQUIRE(t.size() == 1);
  auto s = product_successor(n, "a", ta, 1, t[0]);
  REQUIRE(s);
  CHECK(s->ta_loc == ta.edges[1].target);
  size_t y = *s->node.zone.index_of(clock_var(0));
  CHECK(s->node.zone.at(y, 0) == Bound::zero());
  CHECK_FALSE(product_successor(*s, "a", ta, 0, enumerate_targets(s->node, "a", a1)[0]));
  auto other = *s;
  other.ta_loc = 0;
  CHECK_FALSE(compound_entails(*s, other, 1));
}

TEST_CASE("model checking verdicts") {
  auto a1 = corpus_ata("a1.ata");
  auto r = model_check(corpus_ta("two_a_one_apart.ta"), a1);
  CHECK(r.verdict.kind == VerdictKind::Empty);

  auto loop = model_check(corpus_ta("one_loop.ta"), a1);
  CHECK(loop.verdict.kind == VerdictKind::NonEmpty);

  auto sp = corpus_ta("spaced.ta");
  auto rs = model_check(sp, a1);
  REQUIRE(rs.verdict.kind == VerdictKind::NonEmpty);
  CHECK(ta_accepts(sp, rs.verdict.witness));
  CHECK(accepts(a1, rs.verdict.witness));

  auto none = corpus_ta("one_loop.ta");
  none.accepting.clear();
  CHECK(model_check(none, a1).verdict.kind == VerdictKind::Empty);
}

TEST_CASE("trivial automaton leaves the verdict unchanged") {
  for (const char *f : {"a1.ata", "a2.ata"}) {
    auto a = corpus_ata(f);
    auto p = model_check(trivial_ta(a.alphabet), a);
    auto e = explore(a);
    CHECK(p.verdict.kind == e.verdict.kind);
  }
  auto a = parse_ata("ata B; alphabet a; init q0; accepting q2;\n"
                     "q0 -a-> x.q1;\nq1 -a-> ([1,1] & q2) | q1;\nq2 -a-> q2;\n");
  auto p = model_check(trivial_ta(a.alphabet), a);
  REQUIRE(p.verdict.kind == VerdictKind::NonEmpty);
  CHECK(accepts(a, p.verdict.witness));
}

TEST_CASE("letters outside the timed automaton alphabet are never read") {
  auto a = parse_ata("ata N; alphabet a b; init q0; accepting q1;\n"
                     "q0 -a-> q0;\nq0 -b-> q1;\nq1 -a-> q1;\nq1 -b-> q1;\n");
  CHECK(model_check(corpus_ta("one_loop.ta"), a).verdict.kind == VerdictKind::Empty);
  CHECK(model_check(trivial_ta(a.alphabet), a).verdict.kind == VerdictKind::NonEmpty);
}
