#include "oneata/text.hh"

#include "lexer.hh"

#include <algorithm>

namespace oneata {

using detail::ParseError;
using detail::Token;
using detail::TokenStream;
using TF = TransitionFormula;

namespace {

class AtaParser {
public:
  explicit AtaParser(const std::string &text) : ts_(detail::tokenize(text)) {}

  OneATA run() {
    bool have_name = false, have_alpha = false, have_init = false;
    std::string init_name;
    Token init_tok;
    struct Pending {
      Token at;
      Loc q;
      std::string letter;
      FormulaPtr f;
    };
    std::vector<Pending> pending;
    while (!ts_.at_end()) {
      const Token &t = ts_.peek();
      if (t.kind == Token::Kind::Ident && t.text == "ata" && !ts_.is("-", 1)) {
        ts_.next();
        a_.name = ts_.expect_ident("automaton name").text;
        have_name = true;
        ts_.expect(";");
      } else if (t.kind == Token::Kind::Ident && t.text == "alphabet" && !ts_.is("-", 1)) {
        ts_.next();
        while (!ts_.is(";")) {
          auto l = ts_.expect_ident("a letter");
          if (a_.has_letter(l.text))
            throw ParseError(l.line, l.col, "duplicate letter '" + l.text + "'");
          a_.alphabet.push_back(l.text);
        }
        ts_.expect(";");
        have_alpha = true;
      } else if (t.kind == Token::Kind::Ident && t.text == "locations" && !ts_.is("-", 1)) {
        ts_.next();
        while (!ts_.is(";"))
          location(ts_.expect_ident("a location"));
        ts_.expect(";");
      } else if (t.kind == Token::Kind::Ident && t.text == "init" && !ts_.is("-", 1)) {
        ts_.next();
        init_tok = ts_.expect_ident("initial location");
        a_.initial = location(init_tok);
        have_init = true;
        ts_.expect(";");
      } else if (t.kind == Token::Kind::Ident && t.text == "accepting" && !ts_.is("-", 1)) {
        ts_.next();
        while (!ts_.is(";"))
          a_.accepting.insert(location(ts_.expect_ident("a location")));
        ts_.expect(";");
      } else {
        Token src = ts_.expect_ident("a declaration or transition");
        Loc q = location(src);
        ts_.expect("-");
        Token letter = ts_.expect_ident("a letter");
        ts_.expect("->");
        FormulaPtr f = disjunction();
        ts_.expect(";");
        pending.push_back({letter, q, letter.text, f});
      }
    }
    if (!have_name)
      throw ParseError(1, 1, "missing 'ata NAME;' header");
    if (!have_alpha || a_.alphabet.empty())
      throw ParseError(1, 1, "empty or missing alphabet");
    if (!have_init)
      throw ParseError(1, 1, "missing 'init' declaration");
    std::map<std::pair<Loc, std::string>, std::vector<Clause>> delta;
    for (const auto &p : pending) {
      if (!a_.has_letter(p.letter))
        throw ParseError(p.at.line, p.at.col, "letter '" + p.letter + "' is not in the alphabet");
      auto &dst = delta[{p.q, p.letter}];
      auto cls = dnf_normalize(*p.f);
      if (dst.size() == 1 && dst[0].is_false)
        dst.clear();
      for (auto &c : cls)
        if (std::find(dst.begin(), dst.end(), c) == dst.end() && !(c.is_false && !dst.empty()))
          dst.push_back(c);
    }
    for (auto &[key, cls] : delta)
      a_.set_transition(key.first, key.second, std::move(cls));
    a_.validate();
    return a_;
  }

private:
  Loc location(const Token &t) {
    static const std::vector<std::string> reserved{"true", "false", "x", "inf", "ata",
                                                   "alphabet", "init", "accepting", "locations"};
    if (std::find(reserved.begin(), reserved.end(), t.text) != reserved.end())
      throw ParseError(t.line, t.col, "'" + t.text + "' cannot name a location");
    return a_.add_location(t.text);
  }

  FormulaPtr disjunction() {
    FormulaPtr f = conjunction();
    while (ts_.accept("|"))
      f = TF::disj(f, conjunction());
    return f;
  }

  FormulaPtr conjunction() {
    FormulaPtr f = unary();
    while (ts_.accept("&"))
      f = TF::conj(f, unary());
    return f;
  }

  FormulaPtr unary() {
    const Token &t = ts_.peek();
    if (t.kind == Token::Kind::Ident && (t.text == "x" || t.text == "~x")) {
      bool deact = t.text == "~x";
      ts_.next();
      ts_.expect(".");
      FormulaPtr sub = unary();
      return deact ? TF::deactivate(sub) : TF::reset(sub);
    }
    if (ts_.is("~")) {
      ts_.next();
      Token x = ts_.expect_ident("'x' after '~'");
      if (x.text != "x")
        throw ParseError(x.line, x.col, "expected 'x' after '~'");
      ts_.expect(".");
      return TF::deactivate(unary());
    }
    if (t.kind == Token::Kind::Ident && t.text == "true") {
      ts_.next();
      return TF::tt();
    }
    if (t.kind == Token::Kind::Ident && t.text == "false") {
      ts_.next();
      return TF::ff();
    }
    if (t.kind == Token::Kind::Ident)
      return TF::state(location(ts_.next()));
    if (ts_.is("[") || (ts_.is("(") && ts_.peek(1).kind == Token::Kind::Number))
      return TF::guarded(detail::parse_interval(ts_));
    if (ts_.accept("(")) {
      FormulaPtr f = disjunction();
      ts_.expect(")");
      return f;
    }
    ts_.fail("expected a transition formula");
  }

  TokenStream ts_;
  OneATA a_;
};

std::string join(const std::vector<std::string> &xs) {
  std::string s;
  for (const auto &x : xs)
    s += " " + x;
  return s;
}

} // namespace

OneATA parse_ata(const std::string &text) { return AtaParser(text).run(); }

std::string print_clause(const Clause &c, const OneATA &a) {
  if (c.is_false)
    return "false";
  std::vector<std::string> atoms;
  if (c.guard)
    atoms.push_back(to_string(*c.guard));
  for (Loc q : c.now_states)
    atoms.push_back(a.loc_name(q));
  for (Loc q : c.reset_states)
    atoms.push_back("x." + a.loc_name(q));
  for (Loc q : c.deactivated_states)
    atoms.push_back("~x." + a.loc_name(q));
  if (atoms.empty())
    return "true";
  std::string s = atoms[0];
  for (size_t i = 1; i < atoms.size(); ++i)
    s += " & " + atoms[i];
  return s;
}

std::string print_ata(const OneATA &a) {
  std::string s = "ata " + a.name + ";\n";
  s += "alphabet" + join(a.alphabet) + ";\n";
  s += "locations" + join(a.locations) + ";\n";
  s += "init " + a.loc_name(a.initial) + ";\n";
  std::vector<std::string> acc;
  for (Loc q : a.accepting)
    acc.push_back(a.loc_name(q));
  s += "accepting" + join(acc) + ";\n";
  for (Loc q = 0; q < static_cast<Loc>(a.locations.size()); ++q)
    for (const auto &letter : a.alphabet) {
      const auto *cls = a.transitions(q, letter);
      if (!cls)
        continue;
      s += a.loc_name(q) + " -" + letter + "-> ";
      for (size_t i = 0; i < cls->size(); ++i) {
        std::string c = print_clause((*cls)[i], a);
        bool wrap = cls->size() > 1 && c.find(" & ") != std::string::npos;
        s += (i ? " | " : "") + (wrap ? "(" + c + ")" : c);
      }
      s += ";\n";
    }
  return s;
}

} // namespace oneata
