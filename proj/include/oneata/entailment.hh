#pragma once

#include "oneata/ata.hh"
#include "oneata/dbm.hh"
#include "oneata/zones.hh"

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace oneata {

/// Finite union of canonical non-empty zones over one variable list.
/// An empty member list denotes the empty set.
class ZoneUnion {
public:
  ZoneUnion() = default;
  explicit ZoneUnion(Dbm z) { zones_.push_back(std::move(z)); }

  bool empty() const { return zones_.empty(); }
  const std::vector<Dbm> &zones() const { return zones_; }

  /// Inserts z unless a member already includes it; drops members z includes.
  void add(Dbm z);
  ZoneUnion intersect(const ZoneUnion &other) const;
  bool contains(const Valuation &v) const;

private:
  std::vector<Dbm> zones_;
};

/// Location-preserving injection, as (source, target) pairs.
using VarMapping = std::vector<std::pair<VarName, VarName>>;

bool region_equivalent(const Configuration &g1, const Configuration &g2, long long M);
/// Some subset of g2 is region equivalent to g1.
bool config_entails(const Configuration &g1, const Configuration &g2, long long M);

/// Valuations of zr_prime with no region-equivalent valuation in zr. Both
/// zones must be canonical and range over matching variable positions.
ZoneUnion compute_Nr(const Dbm &zr, const Dbm &zr_prime, long long M);

struct EntailResult {
  bool entails = false;
  /// On non-entailment, a valuation of n2's zone witnessing it (absent when
  /// the inactive sets already decide).
  std::optional<Valuation> witness;
  size_t leaves = 0;
};

EntailResult node_entails_ex(const Node &n1, const Node &n2, long long M);
bool node_entails(const Node &n1, const Node &n2, long long M);
/// Identity-mapping check; requires Var(Z1) = Var(Z2).
bool node_entails_bounded(const Node &n1, const Node &n2, long long M);
/// Region enumeration over Var(Z2). Small instances only.
bool brute_force_node_entails(const Node &n1, const Node &n2, long long M);

/// Monotone 3-CNF. Literals are non-zero integers, negative for negation.
struct Cnf {
  int num_vars = 0;
  std::vector<std::array<int, 3>> clauses;
};

/// DIMACS-like text: optional `p cnf V C` header, `c` comments, clauses
/// terminated by 0. Throws std::invalid_argument.
Cnf parse_cnf(const std::string &text);
std::string print_cnf(const Cnf &f);
bool is_monotone(const Cnf &f);
bool brute_force_sat(const Cnf &f);

struct HardnessInstance {
  Node z;
  Node z_prime;
  long long m_const = 0;
  Cnf formula; // positives first, as used in the construction
  Naming names;
};

/// Throws std::invalid_argument on non-monotone input.
HardnessInstance gen_hardness_instance(const Cnf &f);

} // namespace oneata
