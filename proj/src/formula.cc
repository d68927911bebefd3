#include "oneata/formula.hh"

#include <algorithm>

namespace oneata {

namespace {

using K = TransitionFormula::Kind;

FormulaPtr make(K k, FormulaPtr a = nullptr, FormulaPtr b = nullptr) {
  auto f = std::make_shared<TransitionFormula>();
  f->kind = k;
  f->lhs = std::move(a);
  f->rhs = std::move(b);
  return f;
}

// Clock context in which a subformula is read.
enum class Mode { Current, Zero, Bottom };

std::optional<Clause> merge(const Clause &a, const Clause &b) {
  Clause c = a;
  if (b.guard) {
    if (c.guard) {
      auto g = c.guard->intersect(*b.guard);
      if (!g)
        return std::nullopt;
      c.guard = g;
    } else {
      c.guard = b.guard;
    }
  }
  c.now_states.insert(b.now_states.begin(), b.now_states.end());
  c.reset_states.insert(b.reset_states.begin(), b.reset_states.end());
  c.deactivated_states.insert(b.deactivated_states.begin(), b.deactivated_states.end());
  return c;
}

void push_unique(std::vector<Clause> &out, Clause c) {
  if (std::find(out.begin(), out.end(), c) == out.end())
    out.push_back(std::move(c));
}

std::vector<Clause> dnf(const TransitionFormula &f, Mode mode) {
  switch (f.kind) {
  case K::True:
    return {Clause{}};
  case K::False:
    return {};
  case K::State: {
    Clause c;
    if (mode == Mode::Current)
      c.now_states.insert(f.loc);
    else if (mode == Mode::Zero)
      c.reset_states.insert(f.loc);
    else
      c.deactivated_states.insert(f.loc);
    return {c};
  }
  case K::Guard: {
    if (mode == Mode::Bottom)
      return {Clause{}};
    if (mode == Mode::Zero)
      return f.guard.contains(Rational(0)) ? std::vector<Clause>{Clause{}} : std::vector<Clause>{};
    Clause c;
    c.guard = f.guard;
    return {c};
  }
  case K::And: {
    auto l = dnf(*f.lhs, mode);
    auto r = dnf(*f.rhs, mode);
    std::vector<Clause> out;
    for (const auto &a : l)
      for (const auto &b : r)
        if (auto m = merge(a, b))
          push_unique(out, std::move(*m));
    return out;
  }
  case K::Or: {
    auto out = dnf(*f.lhs, mode);
    for (auto &c : dnf(*f.rhs, mode))
      push_unique(out, std::move(c));
    return out;
  }
  case K::Reset:
    return dnf(*f.lhs, Mode::Zero);
  case K::Deactivate:
    return dnf(*f.lhs, Mode::Bottom);
  }
  return {};
}

} // namespace

FormulaPtr TransitionFormula::tt() { return make(K::True); }
FormulaPtr TransitionFormula::ff() { return make(K::False); }

FormulaPtr TransitionFormula::state(Loc q) {
  auto f = std::make_shared<TransitionFormula>();
  f->kind = K::State;
  f->loc = q;
  return f;
}

FormulaPtr TransitionFormula::guarded(const Interval &i) {
  auto f = std::make_shared<TransitionFormula>();
  f->kind = K::Guard;
  f->guard = i;
  return f;
}

FormulaPtr TransitionFormula::conj(FormulaPtr a, FormulaPtr b) { return make(K::And, a, b); }
FormulaPtr TransitionFormula::disj(FormulaPtr a, FormulaPtr b) { return make(K::Or, a, b); }
FormulaPtr TransitionFormula::reset(FormulaPtr a) { return make(K::Reset, a); }
FormulaPtr TransitionFormula::deactivate(FormulaPtr a) { return make(K::Deactivate, a); }

std::vector<Clause> dnf_normalize(const TransitionFormula &f) {
  auto out = dnf(f, Mode::Current);
  if (out.empty())
    out.push_back(Clause::false_clause());
  return out;
}

FormulaPtr clause_to_formula(const Clause &c) {
  using TF = TransitionFormula;
  if (c.is_false)
    return TF::ff();
  FormulaPtr acc;
  auto add = [&](FormulaPtr p) { acc = acc ? TF::conj(acc, p) : p; };
  if (c.guard)
    add(TF::guarded(*c.guard));
  for (Loc q : c.now_states)
    add(TF::state(q));
  for (Loc q : c.reset_states)
    add(TF::reset(TF::state(q)));
  for (Loc q : c.deactivated_states)
    add(TF::deactivate(TF::state(q)));
  return acc ? acc : TF::tt();
}

} // namespace oneata
