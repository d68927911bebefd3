#pragma once

#include "oneata/ata.hh"
#include "oneata/interval.hh"

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace oneata::mtl {

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

/// MTL in negation normal form.
struct Formula {
  enum class Op { Atom, NegAtom, And, Or, Next, Until };
  Op op = Op::Atom;
  std::string atom;
  Interval interval;
  FormulaPtr left, right; // Next uses left only

  static FormulaPtr make_atom(const std::string &a);
  static FormulaPtr make_negatom(const std::string &a);
  static FormulaPtr make_and(FormulaPtr l, FormulaPtr r);
  static FormulaPtr make_or(FormulaPtr l, FormulaPtr r);
  static FormulaPtr make_next(const Interval &i, FormulaPtr f);
  static FormulaPtr make_until(const Interval &i, FormulaPtr l, FormulaPtr r);
};

/// Surface grammar: atoms, `!atom`, `&`, `|`, `X[l,u] f`, `f U[l,u] g`,
/// `F[l,u] f`, `true`, parentheses; omitted intervals mean [0,inf).
/// `true` becomes (p | !p) for the smallest atom p of the formula.
FormulaPtr parse(const std::string &text);

/// Fully parenthesised form; parse(to_string(f)) is structurally equal to f.
std::string to_string(const Formula &f);
bool equal(const Formula &a, const Formula &b);

/// (w,i) |= f with 1-based i.
bool holds(const TimedWord &w, size_t i, const Formula &f);
inline bool satisfies(const TimedWord &w, const Formula &f) { return !w.empty() && holds(w, 1, f); }

bool is_pure_ltl(const Formula &f);
bool is_one_sided(const Formula &f);
/// Throws std::invalid_argument if f is not one-sided.
unsigned width_bound(const Formula &f);
std::vector<std::string> atoms(const Formula &f);

struct TranslationResult {
  OneATA automaton;
  /// Closure element (to_string of the formula, "init", or "(X...)^r") -> location.
  std::map<std::string, Loc> location_of;
  std::optional<unsigned> width_bound; // nullopt = unbounded marker
};

/// Translation with deactivation. The alphabet is the formula's atoms plus
/// extra_letters.
TranslationResult translate(const Formula &f, const std::vector<std::string> &extra_letters = {});

} // namespace oneata::mtl
