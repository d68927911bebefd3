#include "oneata/mtl.hh"

#include "lexer.hh"

#include <algorithm>
#include <functional>
#include <set>

namespace oneata::mtl {

using detail::ParseError;
using detail::Token;
using detail::TokenStream;

namespace {

FormulaPtr node(Formula::Op op, FormulaPtr l = nullptr, FormulaPtr r = nullptr) {
  auto f = std::make_shared<Formula>();
  f->op = op;
  f->left = std::move(l);
  f->right = std::move(r);
  return f;
}

// Parse tree before `true` is expanded; kTrue marks the placeholder.
const std::string kTrue = "\x01true";

class MtlParser {
public:
  explicit MtlParser(const std::string &text) : ts_(detail::tokenize(text)) {}

  FormulaPtr run() {
    FormulaPtr f = disjunction();
    if (!ts_.at_end())
      ts_.fail("unexpected input after formula");
    return f;
  }

private:
  FormulaPtr disjunction() {
    FormulaPtr f = conjunction();
    while (ts_.accept("|"))
      f = Formula::make_or(f, conjunction());
    return f;
  }

  FormulaPtr conjunction() {
    FormulaPtr f = until();
    while (ts_.accept("&"))
      f = Formula::make_and(f, until());
    return f;
  }

  FormulaPtr until() {
    FormulaPtr f = unary();
    if (keyword("U")) {
      ts_.next();
      Interval i = opt_interval();
      return Formula::make_until(i, f, until());
    }
    return f;
  }

  bool keyword(const std::string &k) const {
    return ts_.peek().kind == Token::Kind::Ident && ts_.peek().text == k;
  }

  Interval opt_interval() {
    if (ts_.is("[") || ts_.is("("))
      if (ts_.is("[") || ts_.peek(1).kind == Token::Kind::Number)
        return detail::parse_interval(ts_);
    return Interval::all();
  }

  FormulaPtr unary() {
    if (ts_.is("!")) {
      Token bang = ts_.next();
      if (ts_.peek().kind != Token::Kind::Ident || is_reserved(ts_.peek().text))
        throw ParseError(bang.line, bang.col, "negation is only allowed on atoms");
      return Formula::make_negatom(ts_.next().text);
    }
    if (keyword("X")) {
      ts_.next();
      Interval i = opt_interval();
      return Formula::make_next(i, unary());
    }
    if (keyword("F")) {
      ts_.next();
      Interval i = opt_interval();
      return Formula::make_until(i, Formula::make_atom(kTrue), unary());
    }
    if (keyword("G"))
      ts_.fail("G is not supported (no negation closure)");
    if (keyword("true")) {
      ts_.next();
      return Formula::make_atom(kTrue);
    }
    if (ts_.accept("(")) {
      FormulaPtr f = disjunction();
      ts_.expect(")");
      return f;
    }
    if (ts_.peek().kind == Token::Kind::Ident && !is_reserved(ts_.peek().text))
      return Formula::make_atom(ts_.next().text);
    ts_.fail("expected a formula");
  }

  static bool is_reserved(const std::string &s) {
    return s == "X" || s == "U" || s == "F" || s == "G" || s == "true" || s == "inf";
  }

  TokenStream ts_;
};

void collect_atoms(const Formula &f, std::set<std::string> &out) {
  if (f.op == Formula::Op::Atom || f.op == Formula::Op::NegAtom) {
    if (f.atom != kTrue)
      out.insert(f.atom);
    return;
  }
  if (f.left)
    collect_atoms(*f.left, out);
  if (f.right)
    collect_atoms(*f.right, out);
}

FormulaPtr expand_true(const FormulaPtr &f, const std::string &p) {
  switch (f->op) {
  case Formula::Op::Atom:
    if (f->atom == kTrue)
      return Formula::make_or(Formula::make_atom(p), Formula::make_negatom(p));
    return f;
  case Formula::Op::NegAtom:
    return f;
  case Formula::Op::Next:
    return Formula::make_next(f->interval, expand_true(f->left, p));
  case Formula::Op::Until:
    return Formula::make_until(f->interval, expand_true(f->left, p), expand_true(f->right, p));
  case Formula::Op::And:
    return Formula::make_and(expand_true(f->left, p), expand_true(f->right, p));
  case Formula::Op::Or:
    return Formula::make_or(expand_true(f->left, p), expand_true(f->right, p));
  }
  return f;
}

} // namespace

FormulaPtr Formula::make_atom(const std::string &a) {
  auto f = node(Op::Atom);
  std::const_pointer_cast<Formula>(f)->atom = a;
  return f;
}

FormulaPtr Formula::make_negatom(const std::string &a) {
  auto f = std::make_shared<Formula>();
  f->op = Op::NegAtom;
  f->atom = a;
  return f;
}

FormulaPtr Formula::make_and(FormulaPtr l, FormulaPtr r) { return node(Op::And, l, r); }
FormulaPtr Formula::make_or(FormulaPtr l, FormulaPtr r) { return node(Op::Or, l, r); }

FormulaPtr Formula::make_next(const Interval &i, FormulaPtr f) {
  auto n = std::make_shared<Formula>();
  n->op = Op::Next;
  n->interval = i;
  n->left = std::move(f);
  return n;
}

FormulaPtr Formula::make_until(const Interval &i, FormulaPtr l, FormulaPtr r) {
  auto n = std::make_shared<Formula>();
  n->op = Op::Until;
  n->interval = i;
  n->left = std::move(l);
  n->right = std::move(r);
  return n;
}

FormulaPtr parse(const std::string &text) {
  FormulaPtr raw = MtlParser(text).run();
  std::set<std::string> as;
  collect_atoms(*raw, as);
  bool has_true = to_string(*raw).find(kTrue) != std::string::npos;
  if (!has_true)
    return raw;
  if (as.empty())
    throw std::invalid_argument("'true' needs at least one atom in the formula");
  return expand_true(raw, *as.begin());
}

std::string to_string(const Formula &f) {
  switch (f.op) {
  case Formula::Op::Atom:
    return f.atom;
  case Formula::Op::NegAtom:
    return "!" + f.atom;
  case Formula::Op::And:
    return "(" + to_string(*f.left) + " & " + to_string(*f.right) + ")";
  case Formula::Op::Or:
    return "(" + to_string(*f.left) + " | " + to_string(*f.right) + ")";
  case Formula::Op::Next:
    return "(X" + oneata::to_string(f.interval) + " " + to_string(*f.left) + ")";
  case Formula::Op::Until:
    return "(" + to_string(*f.left) + " U" + oneata::to_string(f.interval) + " " +
           to_string(*f.right) + ")";
  }
  return "";
}

bool equal(const Formula &a, const Formula &b) { return to_string(a) == to_string(b); }

bool holds(const TimedWord &w, size_t i, const Formula &f) {
  size_t n = w.size();
  if (i < 1 || i > n)
    return false;
  switch (f.op) {
  case Formula::Op::Atom:
    return w[i - 1].letter == f.atom;
  case Formula::Op::NegAtom:
    return w[i - 1].letter != f.atom;
  case Formula::Op::And:
    return holds(w, i, *f.left) && holds(w, i, *f.right);
  case Formula::Op::Or:
    return holds(w, i, *f.left) || holds(w, i, *f.right);
  case Formula::Op::Next:
    return i + 1 <= n && f.interval.contains(w[i].delay) && holds(w, i + 1, *f.left);
  case Formula::Op::Until: {
    Rational elapsed(0);
    for (size_t k = i; k <= n; ++k) {
      if (k > i)
        elapsed += w[k - 1].delay;
      if (f.interval.contains(elapsed) && holds(w, k, *f.right))
        return true;
      if (!holds(w, k, *f.left))
        return false;
    }
    return false;
  }
  }
  return false;
}

bool is_pure_ltl(const Formula &f) {
  switch (f.op) {
  case Formula::Op::Atom:
  case Formula::Op::NegAtom:
    return true;
  case Formula::Op::And:
  case Formula::Op::Or:
    return is_pure_ltl(*f.left) && is_pure_ltl(*f.right);
  case Formula::Op::Next:
    return f.interval.is_universal() && is_pure_ltl(*f.left);
  case Formula::Op::Until:
    return f.interval.is_universal() && is_pure_ltl(*f.left) && is_pure_ltl(*f.right);
  }
  return false;
}

bool is_one_sided(const Formula &f) {
  switch (f.op) {
  case Formula::Op::Atom:
  case Formula::Op::NegAtom:
    return true;
  case Formula::Op::And:
  case Formula::Op::Or:
    return is_one_sided(*f.left) && is_one_sided(*f.right);
  case Formula::Op::Next:
    return is_one_sided(*f.left);
  case Formula::Op::Until:
    return is_pure_ltl(*f.left) && is_one_sided(*f.right);
  }
  return false;
}

unsigned width_bound(const Formula &f) {
  if (!is_one_sided(f))
    throw std::invalid_argument("width bound requires a one-sided formula");
  if (is_pure_ltl(f))
    return 1;
  switch (f.op) {
  case Formula::Op::And:
    return width_bound(*f.left) + width_bound(*f.right);
  case Formula::Op::Or:
    return std::max(width_bound(*f.left), width_bound(*f.right));
  case Formula::Op::Next:
    return width_bound(*f.left);
  case Formula::Op::Until:
    return width_bound(*f.right);
  default:
    return 1;
  }
}

std::vector<std::string> atoms(const Formula &f) {
  std::set<std::string> as;
  collect_atoms(f, as);
  return {as.begin(), as.end()};
}

namespace {

using TF = oneata::TransitionFormula;
using TPtr = oneata::FormulaPtr;

class Translator {
public:
  Translator(const Formula &phi, const std::vector<std::string> &extra) : phi_(phi) {
    std::set<std::string> letters;
    collect_atoms(phi, letters);
    letters.insert(extra.begin(), extra.end());
    if (letters.empty())
      throw std::invalid_argument("cannot translate a formula over an empty alphabet");
    res_.automaton.name = "mtl";
    res_.automaton.alphabet.assign(letters.begin(), letters.end());
  }

  TranslationResult run() {
    auto &a = res_.automaton;
    Loc init = add("init", "start");
    a.initial = init;
    closure(phi_);
    if (!res_.location_of.count(to_string(phi_)))
      add(to_string(phi_), "phi");
    for (const auto &letter : a.alphabet) {
      TPtr d = delta(phi_, letter);
      d = is_pure_ltl(phi_) ? TF::deactivate(d) : TF::reset(d);
      a.set_transition(init, letter, dnf_normalize(*d));
      for (const auto &[key, q] : res_.location_of) {
        if (q == init)
          continue;
        const Formula &psi = *formula_of_.at(q);
        TPtr t;
        if (rmarker_.count(q)) {
          TPtr body = delta(*psi.left, letter);
          body = is_pure_ltl(*psi.left) ? TF::deactivate(body) : TF::reset(body);
          t = with_guard(psi.interval, body);
        } else {
          t = delta(psi, letter);
        }
        a.set_transition(q, letter, dnf_normalize(*t));
      }
    }
    a.validate();
    res_.width_bound = is_one_sided(phi_) ? std::optional<unsigned>(width_bound(phi_)) : std::nullopt;
    return res_;
  }

private:
  Loc add(const std::string &key, const std::string &name) {
    if (auto it = res_.location_of.find(key); it != res_.location_of.end())
      return it->second;
    Loc q = res_.automaton.add_location(name);
    res_.location_of[key] = q;
    return q;
  }

  void closure(const Formula &f) {
    switch (f.op) {
    case Formula::Op::Atom:
    case Formula::Op::NegAtom:
      break;
    case Formula::Op::And:
    case Formula::Op::Or:
      closure(*f.left);
      closure(*f.right);
      break;
    case Formula::Op::Next: {
      std::string key = to_string(f) + "^r";
      if (!res_.location_of.count(key)) {
        Loc q = add(key, "xr" + std::to_string(++next_count_));
        rmarker_.insert(q);
        formula_of_[q] = &f;
      }
      closure(*f.left);
      break;
    }
    case Formula::Op::Until: {
      std::string key = to_string(f);
      if (!res_.location_of.count(key)) {
        bool top = &f == &phi_;
        Loc q = add(key, top ? "phi" : "u" + std::to_string(++until_count_));
        formula_of_[q] = &f;
      }
      closure(*f.left);
      closure(*f.right);
      break;
    }
    }
    if (&f == &phi_ && !res_.location_of.count(to_string(f))) {
      Loc q = add(to_string(f), "phi");
      formula_of_[q] = &f;
    }
  }

  static TPtr with_guard(const Interval &i, TPtr f) {
    return i.is_universal() ? f : TF::conj(TF::guarded(i), f);
  }

  TPtr wrap(const Formula &f, const std::string &letter) {
    TPtr d = delta(f, letter);
    return is_pure_ltl(f) ? TF::deactivate(d) : d;
  }

  TPtr delta(const Formula &f, const std::string &letter) {
    switch (f.op) {
    case Formula::Op::Atom:
      return f.atom == letter ? TF::tt() : TF::ff();
    case Formula::Op::NegAtom:
      return f.atom == letter ? TF::ff() : TF::tt();
    case Formula::Op::And:
      return TF::conj(wrap(*f.left, letter), wrap(*f.right, letter));
    case Formula::Op::Or:
      return TF::disj(wrap(*f.left, letter), wrap(*f.right, letter));
    case Formula::Op::Next: {
      TPtr q = TF::state(res_.location_of.at(to_string(f) + "^r"));
      return is_pure_ltl(f) ? TF::deactivate(q) : TF::reset(q);
    }
    case Formula::Op::Until: {
      TPtr d2 = delta(*f.right, letter);
      d2 = is_pure_ltl(*f.right) ? TF::deactivate(d2) : TF::reset(d2);
      TPtr d1 = delta(*f.left, letter);
      d1 = is_pure_ltl(*f.left) ? TF::deactivate(d1) : TF::reset(d1);
      TPtr self = TF::state(res_.location_of.at(to_string(f)));
      return TF::disj(with_guard(f.interval, d2), TF::conj(d1, self));
    }
    }
    return TF::ff();
  }

  const Formula &phi_;
  TranslationResult res_;
  std::map<Loc, const Formula *> formula_of_;
  std::set<Loc> rmarker_;
  int until_count_ = 0;
  int next_count_ = 0;
};

} // namespace

TranslationResult translate(const Formula &f, const std::vector<std::string> &extra_letters) {
  return Translator(f, extra_letters).run();
}

} // namespace oneata::mtl
