#pragma once

#include "oneata/formula.hh"
#include "oneata/rational.hh"

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace oneata {

/// Difference bound (<,k) or (<=,k), or +inf. Encoded as 2k+weak.
class Bound {
public:
  static constexpr int64_t kInfRaw = INT64_MAX / 4;

  constexpr Bound() : raw_(kInfRaw) {}
  static constexpr Bound le(int64_t k) { return Bound(k * 2 + 1); }
  static constexpr Bound lt(int64_t k) { return Bound(k * 2); }
  static constexpr Bound inf() { return Bound(kInfRaw); }
  static constexpr Bound zero() { return le(0); }

  constexpr bool is_inf() const { return raw_ >= kInfRaw; }
  constexpr int64_t value() const { return raw_ >> 1; }
  constexpr bool strict() const { return (raw_ & 1) == 0; }
  constexpr int64_t raw() const { return raw_; }

  constexpr Bound operator+(Bound o) const {
    if (is_inf() || o.is_inf())
      return inf();
    return Bound(((value() + o.value()) << 1) | (raw_ & o.raw_ & 1));
  }
  constexpr auto operator<=>(const Bound &o) const { return raw_ <=> o.raw_; }
  constexpr bool operator==(const Bound &o) const { return raw_ == o.raw_; }

  /// Does a difference d satisfy "d REL value"?
  bool admits(const Rational &d) const;

private:
  constexpr explicit Bound(int64_t raw) : raw_(raw) {}
  int64_t raw_;
};

std::string to_string(Bound b);

/// Variable x_{loc,index}. Negative loc values name timed-automaton clocks.
struct VarName {
  Loc loc = 0;
  int index = 1;
  bool is_clock() const { return loc < 0; }
  auto operator<=>(const VarName &) const = default;
  bool operator==(const VarName &) const = default;
};

inline VarName clock_var(int k) { return VarName{-(k + 1), 1}; }

/// Valuation aligned with Dbm::vars().
using Valuation = std::vector<Rational>;

/// Difference-bound matrix. Entry (i,j) bounds x_i - x_j; index 0 is the
/// constant zero, variable k lives at index k+1.
class Dbm {
public:
  Dbm() : m_(1, Bound::zero()) {}
  /// All variables >= 0 and otherwise unconstrained; canonical.
  explicit Dbm(std::vector<VarName> vars);

  const std::vector<VarName> &vars() const { return vars_; }
  size_t size() const { return vars_.size(); }
  size_t dim() const { return vars_.size() + 1; }
  /// Matrix index of a variable (1-based), or nullopt.
  std::optional<size_t> index_of(const VarName &v) const;

  Bound at(size_t i, size_t j) const { return m_[i * dim() + j]; }
  void set(size_t i, size_t j, Bound b) { m_[i * dim() + j] = b; }

  /// Floyd-Warshall closure; false iff the zone is empty.
  bool canonicalize();
  /// Adds x_i - x_j <= b to a canonical matrix and restores canonicity.
  /// False iff the result is empty (matrix left unspecified then).
  bool constrain(size_t i, size_t j, Bound b);
  /// Constrains variable at matrix index i to lie in the interval.
  bool constrain_interval(size_t i, const Interval &in);
  /// Drops upper bounds against zero (time successors).
  void up();
  /// Sets x_i := 0 on a canonical matrix.
  void reset(size_t i);

  /// Canonical projection keeping the given variable matrix indices (>= 1),
  /// in that order; the zero row is always kept.
  Dbm project(const std::vector<size_t> &keep) const;
  /// Same matrix with renamed variables.
  Dbm renamed(std::vector<VarName> vars) const;

  /// For canonical matrices over the same variable list: other ⊆ this.
  bool includes(const Dbm &other) const;
  bool contains(const Valuation &v) const;
  /// Canonical intersection over identical variable lists; nullopt if empty.
  std::optional<Dbm> intersect(const Dbm &other) const;

  bool operator==(const Dbm &o) const { return vars_ == o.vars_ && m_ == o.m_; }
  size_t hash() const;
  long long max_constant() const;

private:
  std::vector<VarName> vars_;
  std::vector<Bound> m_;
};

/// A point of a canonical non-empty DBM, choosing simplest rationals and
/// honouring pre-fixed values (keyed by variable position). nullopt when the
/// fixed values are inconsistent.
std::optional<Valuation> sample_point(const Dbm &z, const std::map<size_t, Rational> &fixed = {});
/// Randomised variant with small denominators.
std::optional<Valuation> sample_point_random(const Dbm &z, std::mt19937_64 &rng,
                                             const std::map<size_t, Rational> &fixed = {});

} // namespace oneata
