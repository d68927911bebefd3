#pragma once

#include "oneata/interval.hh"

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace oneata {

using Loc = int;

struct TransitionFormula;
using FormulaPtr = std::shared_ptr<const TransitionFormula>;

/// Positive boolean formula over states, guards, x. and x-bar.
struct TransitionFormula {
  enum class Kind { True, False, State, Guard, And, Or, Reset, Deactivate };
  Kind kind = Kind::True;
  Loc loc = -1;
  Interval guard;
  FormulaPtr lhs, rhs;

  static FormulaPtr tt();
  static FormulaPtr ff();
  static FormulaPtr state(Loc q);
  static FormulaPtr guarded(const Interval &i);
  static FormulaPtr conj(FormulaPtr a, FormulaPtr b);
  static FormulaPtr disj(FormulaPtr a, FormulaPtr b);
  static FormulaPtr reset(FormulaPtr a);
  static FormulaPtr deactivate(FormulaPtr a);
};

/// One disjunct of a DNF transition. The guard is the intersection of all
/// guards of the disjunct (absent = no guard).
struct Clause {
  std::optional<Interval> guard;
  std::set<Loc> now_states;
  std::set<Loc> reset_states;
  std::set<Loc> deactivated_states;
  bool is_false = false;

  static Clause false_clause() {
    Clause c;
    c.is_false = true;
    return c;
  }
  bool is_true() const {
    return !is_false && !guard && now_states.empty() && reset_states.empty() &&
           deactivated_states.empty();
  }
  /// No state atoms (the guard may still constrain).
  bool has_no_atoms() const {
    return now_states.empty() && reset_states.empty() && deactivated_states.empty();
  }

  auto operator<=>(const Clause &) const = default;
  bool operator==(const Clause &) const = default;
};

std::vector<Clause> dnf_normalize(const TransitionFormula &f);

/// Back to a formula (used by the printer and tests).
FormulaPtr clause_to_formula(const Clause &c);

} // namespace oneata
