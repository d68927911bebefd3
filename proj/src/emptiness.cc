#include "oneata/emptiness.hh"

#include "oneata/entailment.hh"

#include <algorithm>
#include <deque>
#include <map>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <unordered_map>

namespace oneata {

Pruning parse_pruning(const std::string &s) {
  if (s == "full")
    return Pruning::Full;
  if (s == "bounded")
    return Pruning::Bounded;
  if (s == "none")
    return Pruning::None;
  throw std::invalid_argument("unknown pruning mode '" + s + "'");
}

std::string to_string(Pruning p) {
  switch (p) {
  case Pruning::Full:
    return "full";
  case Pruning::Bounded:
    return "bounded";
  case Pruning::None:
    return "none";
  }
  return "?";
}

std::string to_string(VerdictKind k) {
  switch (k) {
  case VerdictKind::NonEmpty:
    return "NonEmpty";
  case VerdictKind::Empty:
    return "Empty";
  case VerdictKind::Inconclusive:
    return "Inconclusive";
  }
  return "?";
}

namespace {

struct GraphNodeHash {
  size_t operator()(const GraphNode &n) const { return n.hash(); }
};

bool covers(const GraphNode &n, const GraphNode &m, Pruning p, long long M) {
  if (n.ta_loc != m.ta_loc)
    return false;
  return p == Pruning::Full ? node_entails(n.node, m.node, M)
                            : node_entails_bounded(n.node, m.node, M);
}

using Successors = std::vector<std::pair<StepLabel, GraphNode>>;

std::vector<Successors> expand_batch(const SearchProblem &p, const ZoneGraph &g,
                                     const std::vector<size_t> &batch, unsigned jobs) {
  std::vector<Successors> out(batch.size());
  if (jobs <= 1 || batch.size() < 2) {
    for (size_t i = 0; i < batch.size(); ++i)
      out[i] = p.successors(g.nodes[batch[i]]);
    return out;
  }
  std::vector<std::thread> workers;
  size_t w = std::min<size_t>(jobs, batch.size());
  for (size_t t = 0; t < w; ++t)
    workers.emplace_back([&, t] {
      for (size_t i = t; i < batch.size(); i += w)
        out[i] = p.successors(g.nodes[batch[i]]);
    });
  for (auto &th : workers)
    th.join();
  return out;
}

} // namespace

ExploreResult explore_problem(const SearchProblem &p, const ExploreConfig &cfg) {
  ExploreResult res;
  res.max_constant = cfg.max_constant.value_or(p.max_constant);
  long long M = res.max_constant;
  ZoneGraph &g = res.graph;
  std::unordered_map<GraphNode, size_t, GraphNodeHash> index;
  std::deque<size_t> frontier;
  std::optional<size_t> found;

  auto add_node = [&](GraphNode n, std::optional<size_t> parent) {
    size_t id = g.nodes.size();
    index.emplace(n, id);
    g.accepting.push_back(p.accepting(n));
    g.nodes.push_back(std::move(n));
    g.parent_edge.push_back(parent);
    frontier.push_back(id);
    if (g.accepting.back() && !found)
      found = id;
    return id;
  };

  add_node(p.initial, std::nullopt);
  bool truncated = false;
  size_t batch_size = std::max(1u, cfg.jobs) * 4;

  while (!frontier.empty() && !(found && cfg.stop_at_accepting)) {
    std::vector<size_t> batch;
    while (!frontier.empty() && batch.size() < batch_size) {
      if (cfg.order == SearchOrder::BreadthFirst) {
        batch.push_back(frontier.front());
        frontier.pop_front();
      } else {
        batch.push_back(frontier.back());
        frontier.pop_back();
        break; // depth-first expands one node at a time
      }
    }
    auto succs = expand_batch(p, g, batch, cfg.jobs);
    for (size_t b = 0; b < batch.size() && !(found && cfg.stop_at_accepting); ++b) {
      for (auto &[label, node] : succs[b]) {
        GraphEdge e{batch[b], 0, std::move(label), false};
        if (auto it = index.find(node); it != index.end()) {
          e.to = it->second;
          g.edges.push_back(std::move(e));
          continue;
        }
        std::optional<size_t> cover;
        if (cfg.pruning != Pruning::None)
          for (size_t k = 0; k < g.nodes.size() && !cover; ++k)
            if (covers(g.nodes[k], node, cfg.pruning, M))
              cover = k;
        if (cover) {
          e.to = *cover;
          e.covering = true;
          ++res.pruned;
          g.edges.push_back(std::move(e));
          continue;
        }
        if (g.nodes.size() >= cfg.max_nodes) {
          truncated = true;
          continue;
        }
        e.to = g.nodes.size();
        g.edges.push_back(std::move(e));
        add_node(std::move(node), g.edges.size() - 1);
        if (found && cfg.stop_at_accepting)
          break;
      }
    }
  }

  Verdict &v = res.verdict;
  if (found) {
    v.kind = VerdictKind::NonEmpty;
    for (size_t n = *found;;) {
      v.path_nodes.push_back(n);
      auto pe = g.parent_edge[n];
      if (!pe)
        break;
      v.path_edges.push_back(*pe);
      n = g.edges[*pe].from;
    }
    std::reverse(v.path_nodes.begin(), v.path_nodes.end());
    std::reverse(v.path_edges.begin(), v.path_edges.end());
  } else if (truncated) {
    v.kind = VerdictKind::Inconclusive;
    v.reason = "node budget of " + std::to_string(cfg.max_nodes) + " exhausted";
  } else {
    v.kind = VerdictKind::Empty;
  }
  return res;
}

std::vector<PathStep> path_to(const ZoneGraph &g, const std::vector<size_t> &path_edges) {
  std::vector<PathStep> out;
  for (size_t e : path_edges)
    out.push_back(PathStep{g.nodes[g.edges[e].from].node, g.edges[e].label});
  return out;
}

namespace {

// A fresh variable name that never clashes with locations or clocks.
const VarName kDelayVar{-(1 << 28), 1};

} // namespace

std::optional<std::pair<Valuation, Rational>> predecessor(const PathStep &step, const Valuation &next) {
  const Node &src = step.source;
  const StepLabel &lab = step.label;
  std::vector<size_t> origin;
  auto succ = successor_with_clocks(src, lab.target, lab.clock_guards, lab.clock_resets, &origin);
  if (!succ || succ->zone.size() != next.size() || !succ->zone.contains(next))
    return std::nullopt;

  // Source variables plus a delay variable that is 0 before elapsing.
  std::vector<VarName> vars = src.zone.vars();
  vars.push_back(kDelayVar);
  Dbm e(vars);
  size_t n = src.zone.dim(), d = n;
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j)
      e.set(i, j, src.zone.at(i, j));
  for (size_t i = 0; i < n; ++i) {
    e.set(d, i, src.zone.at(0, i));
    e.set(i, d, src.zone.at(i, 0));
  }
  e.set(d, 0, Bound::zero());
  e.up();
  for (size_t j = 0; j < lab.target.vars.size(); ++j) {
    const auto &c = lab.target.clauses[j];
    if (c.guard && lab.target.vars[j].index != 0 &&
        !e.constrain_interval(*e.index_of(lab.target.vars[j]), *c.guard))
      return std::nullopt;
  }
  for (const auto &[clk, in] : lab.clock_guards)
    if (!e.constrain_interval(*e.index_of(clk), in))
      return std::nullopt;

  std::map<size_t, Rational> fixed;
  for (size_t k = 0; k < origin.size(); ++k) {
    if (origin[k] == 0) {
      if (next[k] != Rational(0))
        return std::nullopt;
      continue;
    }
    auto [it, fresh] = fixed.emplace(origin[k] - 1, next[k]);
    if (!fresh && it->second != next[k])
      return std::nullopt;
  }
  auto u = sample_point(e, fixed);
  if (!u)
    return std::nullopt;
  Rational delay = u->back();
  Valuation prev;
  for (size_t i = 0; i + 1 < u->size(); ++i)
    prev.push_back((*u)[i] - delay);
  return std::make_pair(std::move(prev), delay);
}

TimedWord extract_witness(const std::vector<PathStep> &path, const Node &last) {
  auto cur = sample_point(last.zone);
  if (!cur)
    throw std::logic_error("witness extraction: final zone is empty");
  TimedWord word(path.size());
  for (size_t s = path.size(); s-- > 0;) {
    auto pre = predecessor(path[s], *cur);
    if (!pre)
      throw std::logic_error("witness extraction: no predecessor at step " + std::to_string(s + 1));
    word[s] = TimedEvent{pre->second, path[s].label.letter};
    cur = std::move(pre->first);
  }
  return word;
}

TimedWord extract_witness(const std::vector<PathStep> &path, const Node &last, const OneATA &a) {
  TimedWord w = extract_witness(path, last);
  if (!accepts(a, w))
    throw std::logic_error("witness extraction: word " + to_string(w) + " is not accepted");
  return w;
}

std::vector<std::pair<StepLabel, GraphNode>> ata_successors(const OneATA &a, const GraphNode &n) {
  std::vector<std::pair<StepLabel, GraphNode>> out;
  for (const auto &letter : a.alphabet)
    for (auto &t : enumerate_targets(n.node, letter, a)) {
      auto s = successor(n.node, letter, t, a);
      if (!s)
        continue;
      StepLabel lab;
      lab.letter = letter;
      lab.target = std::move(t);
      out.emplace_back(std::move(lab), GraphNode{0, std::move(*s)});
    }
  return out;
}

ExploreResult explore(const OneATA &a, const ExploreConfig &cfg) {
  SearchProblem p;
  p.initial = GraphNode{0, initial_node(a)};
  p.max_constant = max_constant(a);
  p.successors = [&a](const GraphNode &n) { return ata_successors(a, n); };
  p.accepting = [&a](const GraphNode &n) { return is_accepting_node(n.node, a); };
  ExploreResult r = explore_problem(p, cfg);
  if (r.verdict.kind == VerdictKind::NonEmpty) {
    const Node &last = r.graph.nodes[r.verdict.path_nodes.back()].node;
    r.verdict.witness = extract_witness(path_to(r.graph, r.verdict.path_edges), last, a);
  }
  return r;
}

ExploreConfig default_config(const mtl::Formula &f) {
  ExploreConfig cfg;
  if (mtl::is_one_sided(f))
    cfg.pruning = Pruning::Bounded;
  return cfg;
}

ExploreResult mtl_sat(const mtl::Formula &f, const ExploreConfig &cfg,
                      const std::vector<std::string> &extra_letters) {
  auto tr = mtl::translate(f, extra_letters);
  return explore(tr.automaton, cfg);
}

namespace {

std::string dot_escape(const std::string &s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\')
      out += '\\';
    if (c == '\n') {
      out += "\\l";
      continue;
    }
    out += c;
  }
  return out;
}

} // namespace

std::string to_dot(const ZoneGraph &g, const Naming &names, const std::vector<std::string> &ta_locs) {
  std::ostringstream os;
  os << "digraph zone_graph {\n  node [shape=box, fontname=\"monospace\"];\n";
  for (size_t i = 0; i < g.nodes.size(); ++i) {
    std::string label = std::to_string(i) + "\n";
    if (!ta_locs.empty())
      label += "@" + ta_locs.at(static_cast<size_t>(g.nodes[i].ta_loc)) + "\n";
    label += dump_node(g.nodes[i].node, names);
    os << "  n" << i << " [label=\"" << dot_escape(label) << "\"";
    if (g.accepting[i])
      os << ", peripheries=2";
    os << "];\n";
  }
  for (const auto &e : g.edges) {
    os << "  n" << e.from << " -> n" << e.to << " [label=\"" << dot_escape(e.label.letter) << "\"";
    if (e.covering)
      os << ", style=dashed";
    os << "];\n";
  }
  os << "}\n";
  return os.str();
}

} // namespace oneata
