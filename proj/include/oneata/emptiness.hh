#pragma once

#include "oneata/ata.hh"
#include "oneata/mtl.hh"
#include "oneata/zones.hh"

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace oneata {

enum class Pruning { Full, Bounded, None };
enum class SearchOrder { BreadthFirst, DepthFirst };

struct ExploreConfig {
  Pruning pruning = Pruning::Full;
  size_t max_nodes = 100000;
  SearchOrder order = SearchOrder::BreadthFirst;
  /// Report NonEmpty at the first accepting node; otherwise explore fully.
  bool stop_at_accepting = true;
  unsigned jobs = 1;
  /// Overrides the maximal constant used by entailment.
  std::optional<long long> max_constant;
};

Pruning parse_pruning(const std::string &s);
std::string to_string(Pruning p);

/// Zone-graph node, optionally paired with a timed-automaton location.
struct GraphNode {
  int ta_loc = 0;
  Node node;
  bool operator==(const GraphNode &o) const { return ta_loc == o.ta_loc && node == o.node; }
  size_t hash() const { return node.hash() * 31 + static_cast<size_t>(ta_loc); }
};

struct StepLabel {
  std::string letter;
  Target target;
  int ta_edge = -1;
  std::vector<std::pair<VarName, Interval>> clock_guards;
  std::vector<VarName> clock_resets;
};

struct GraphEdge {
  size_t from = 0;
  size_t to = 0;
  StepLabel label;
  /// The successor was pruned; `to` is the retained node entailing it.
  bool covering = false;
};

struct ZoneGraph {
  std::vector<GraphNode> nodes;
  std::vector<bool> accepting;
  std::vector<GraphEdge> edges;
  std::vector<std::optional<size_t>> parent_edge;
};

enum class VerdictKind { NonEmpty, Empty, Inconclusive };
std::string to_string(VerdictKind k);

struct Verdict {
  VerdictKind kind = VerdictKind::Empty;
  TimedWord witness;
  std::vector<size_t> path_nodes;
  std::vector<size_t> path_edges;
  std::string reason;
};

struct ExploreResult {
  Verdict verdict;
  ZoneGraph graph;
  size_t pruned = 0;
  long long max_constant = 0;
};

/// Abstract transition system explored by the engine.
struct SearchProblem {
  GraphNode initial;
  long long max_constant = 0;
  std::function<std::vector<std::pair<StepLabel, GraphNode>>(const GraphNode &)> successors;
  std::function<bool(const GraphNode &)> accepting;
};

/// Runs the search; the verdict carries the path but no witness word.
ExploreResult explore_problem(const SearchProblem &p, const ExploreConfig &cfg);

struct PathStep {
  Node source;
  StepLabel label;
};
std::vector<PathStep> path_to(const ZoneGraph &g, const std::vector<size_t> &path_edges);

/// A valuation of step.source and a delay whose successor under the step is
/// `next` (a valuation of the successor zone). nullopt if none exists.
std::optional<std::pair<Valuation, Rational>> predecessor(const PathStep &step, const Valuation &next);

/// Concrete delays for a path ending in `last`, by backward propagation.
TimedWord extract_witness(const std::vector<PathStep> &path, const Node &last);
/// As above, checked with accepts(a, .). Throws std::logic_error on failure.
TimedWord extract_witness(const std::vector<PathStep> &path, const Node &last, const OneATA &a);

/// Zone-graph successors of an ATA node (all letters, all targets).
std::vector<std::pair<StepLabel, GraphNode>> ata_successors(const OneATA &a, const GraphNode &n);

ExploreResult explore(const OneATA &a, const ExploreConfig &cfg = {});

ExploreConfig default_config(const mtl::Formula &f);
ExploreResult mtl_sat(const mtl::Formula &f, const ExploreConfig &cfg,
                      const std::vector<std::string> &extra_letters = {});
inline ExploreResult mtl_sat(const mtl::Formula &f) { return mtl_sat(f, default_config(f)); }

/// Graphviz rendering. `ta_locs` names the first component when non-empty.
std::string to_dot(const ZoneGraph &g, const Naming &names,
                   const std::vector<std::string> &ta_locs = {});

} // namespace oneata
