#pragma once

#include "oneata/ata.hh"
#include "oneata/dbm.hh"

#include <optional>
#include <random>
#include <string>
#include <vector>

namespace oneata {

/// Zone-graph node (Z, IA). A zone without ATA variables stands for Z_empty.
struct Node {
  Dbm zone;
  std::vector<VarName> inactive; // sorted, unique, index 0

  bool is_empty_zone() const { return zone.size() == 0; }
  bool operator==(const Node &o) const { return zone == o.zone && inactive == o.inactive; }
  size_t hash() const;
};

struct NodeHash {
  size_t operator()(const Node &n) const { return n.hash(); }
};

/// Names for locations and clocks used by the textual formats.
struct Naming {
  std::vector<std::string> locs;
  std::vector<std::string> clocks;

  static Naming of(const OneATA &a) { return Naming{a.locations, {}}; }
  std::string var_name(const VarName &v) const;
  Loc location(const std::string &name, bool create);
  VarName clock(const std::string &name, bool create);
};

/// One clause per source variable: active variables first, then inactive.
struct Target {
  std::vector<VarName> vars;
  std::vector<Clause> clauses;
  std::vector<size_t> clause_index; // position in delta(loc, a)
};

Node initial_node(const OneATA &a);
Node time_elapse_node(const Node &n);
std::vector<Target> enumerate_targets(const Node &n, const std::string &letter, const OneATA &a);
std::optional<Node> successor(const Node &n, const std::string &letter, const Target &t,
                              const OneATA &a);

/// Successor with additional clock guards and in-place clock resets; clock
/// variables are carried over unchanged. When origin is given it receives,
/// per result variable, the matrix index in n.zone whose elapsed value it
/// copies (0 for variables that are reset).
std::optional<Node> successor_with_clocks(const Node &n, const Target &t,
                                          const std::vector<std::pair<VarName, Interval>> &clock_guards,
                                          const std::vector<VarName> &clock_resets,
                                          std::vector<size_t> *origin = nullptr);

bool is_accepting_node(const Node &n, const OneATA &a);
bool node_satisfies(const Configuration &g, const Node &n);
/// Clock variables are ignored when building the configuration.
Configuration configuration_of(const Node &n, const Valuation &v);
Configuration sample_configuration(const Node &n);
Configuration sample_configuration_random(const Node &n, std::mt19937_64 &rng);

std::string dump_node(const Node &n, const Naming &names);
/// Accepts dump lines plus the shorthand forms `X REL k` and `X - Y REL k`
/// with REL in {<, <=, =, >=, >}. Throws std::invalid_argument.
Node parse_node(const std::string &text, Naming &names);

} // namespace oneata
