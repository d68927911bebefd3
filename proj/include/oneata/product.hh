#pragma once

#include "oneata/ata.hh"
#include "oneata/emptiness.hh"
#include "oneata/interval.hh"

#include <set>
#include <string>
#include <utility>
#include <vector>

namespace oneata {

struct TaEdge {
  int source = 0;
  std::string letter;
  std::vector<std::pair<int, Interval>> guard; // clock index, interval
  std::vector<int> resets;
  int target = 0;
  bool operator==(const TaEdge &) const = default;
};

/// Classical timed automaton with interval guards and no diagonals.
struct TimedAutomaton {
  std::string name = "T";
  std::vector<std::string> locations;
  std::vector<std::string> clocks;
  std::vector<std::string> alphabet;
  int initial = 0;
  std::set<int> accepting;
  std::vector<TaEdge> edges;

  void validate() const;
  long long max_constant() const;
  bool operator==(const TimedAutomaton &) const = default;
};

/// Header `ta NAME; alphabet ...; clocks y1 y2; init p; accepting p;` then
/// edges `p -a-> q [y1 in [1,2], y2 in (0,inf)] {reset y1};`.
/// Throws std::invalid_argument with line and column.
TimedAutomaton parse_ta(const std::string &text);
std::string print_ta(const TimedAutomaton &ta);

/// One location, no clocks, accepting, a guard-free self-loop per letter.
TimedAutomaton trivial_ta(const std::vector<std::string> &alphabet);

/// Explicit semantics: does the automaton accept w?
bool ta_accepts(const TimedAutomaton &ta, const TimedWord &w);

/// Compound node (p, Z_AB, IA); clocks are the variables clock_var(k).
GraphNode initial_compound(const TimedAutomaton &ta, const OneATA &spec);
std::optional<GraphNode> product_successor(const GraphNode &n, const std::string &letter,
                                           const TimedAutomaton &ta, size_t edge, const Target &t);
bool compound_entails(const GraphNode &n1, const GraphNode &n2, long long M);
bool is_accepting_compound(const GraphNode &n, const TimedAutomaton &ta, const OneATA &spec);

/// Joint emptiness of the TA and the 1-ATA; NonEmpty witnesses are replayed
/// on both explicit semantics.
ExploreResult model_check(const TimedAutomaton &ta, const OneATA &spec, const ExploreConfig &cfg = {});

} // namespace oneata
