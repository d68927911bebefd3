#pragma once

#include "oneata/interval.hh"

#include <algorithm>
#include <cctype>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace oneata::detail {

struct Token {
  enum class Kind { Ident, Number, Punct, End };
  Kind kind = Kind::End;
  std::string text;
  int line = 1;
  int col = 1;
};

class ParseError : public std::invalid_argument {
public:
  ParseError(int line, int col, const std::string &msg)
      : std::invalid_argument("line " + std::to_string(line) + ", column " + std::to_string(col) +
                              ": " + msg) {}
};

/// Tokenizer shared by the ATA and TA formats. `#` and `//` start comments.
/// The UTF-8 sequence "x̄" is returned as the identifier "~x".
inline std::vector<Token> tokenize(const std::string &src) {
  std::vector<Token> out;
  int line = 1, col = 1;
  size_t i = 0;
  auto advance = [&](size_t n) {
    for (size_t k = 0; k < n; ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < src.size()) {
    char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '#' || (c == '/' && i + 1 < src.size() && src[i + 1] == '/')) {
      while (i < src.size() && src[i] != '\n')
        advance(1);
      continue;
    }
    Token t;
    t.line = line;
    t.col = col;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t j = i;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_'))
        ++j;
      t.kind = Token::Kind::Ident;
      t.text = src.substr(i, j - i);
      if (t.text == "x" && src.compare(j, 2, "\xCC\x84") == 0) {
        t.text = "~x";
        j += 2;
      }
      advance(j - i);
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j])))
        ++j;
      t.kind = Token::Kind::Number;
      t.text = src.substr(i, j - i);
      advance(j - i);
    } else if (src.compare(i, 2, "->") == 0) {
      t.kind = Token::Kind::Punct;
      t.text = "->";
      advance(2);
    } else if (std::string(";()[]{},|&~.-=<>!").find(c) != std::string::npos) {
      t.kind = Token::Kind::Punct;
      t.text = std::string(1, c);
      advance(1);
    } else {
      throw ParseError(line, col, std::string("unexpected character '") + c + "'");
    }
    out.push_back(t);
  }
  Token end;
  end.line = line;
  end.col = col;
  out.push_back(end);
  return out;
}

class TokenStream {
public:
  explicit TokenStream(std::vector<Token> toks) : toks_(std::move(toks)) {}
  const Token &peek(size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
  Token next() {
    Token t = peek();
    if (pos_ < toks_.size() - 1)
      ++pos_;
    return t;
  }
  bool at_end() const { return peek().kind == Token::Kind::End; }
  bool is(const std::string &p, size_t k = 0) const {
    return peek(k).kind != Token::Kind::End && peek(k).text == p;
  }
  bool accept(const std::string &p) {
    if (!is(p))
      return false;
    next();
    return true;
  }
  Token expect(const std::string &p) {
    if (!is(p))
      fail("expected '" + p + "'");
    return next();
  }
  Token expect_ident(const std::string &what) {
    if (peek().kind != Token::Kind::Ident)
      fail("expected " + what);
    return next();
  }
  long long expect_number() {
    if (peek().kind != Token::Kind::Number)
      fail("expected a number");
    return std::stoll(next().text);
  }
  [[noreturn]] void fail(const std::string &msg) const {
    const Token &t = peek();
    std::string found = t.kind == Token::Kind::End ? "end of input" : "'" + t.text + "'";
    throw ParseError(t.line, t.col, msg + ", found " + found);
  }

private:
  std::vector<Token> toks_;
  size_t pos_ = 0;
};

/// '[' or '(' NUM ',' (NUM | inf) ']' or ')'
inline Interval parse_interval(TokenStream &ts) {
  const Token start = ts.peek();
  bool lc;
  if (ts.accept("["))
    lc = true;
  else if (ts.accept("("))
    lc = false;
  else
    ts.fail("expected an interval");
  long long lo = ts.expect_number();
  ts.expect(",");
  std::optional<long long> hi;
  if (ts.peek().kind == Token::Kind::Ident && ts.peek().text == "inf")
    ts.next();
  else
    hi = ts.expect_number();
  bool uc;
  if (ts.accept("]"))
    uc = true;
  else if (ts.accept(")"))
    uc = false;
  else
    ts.fail("expected ']' or ')'");
  try {
    return Interval::make(lo, lc, hi, uc);
  } catch (const std::invalid_argument &e) {
    throw ParseError(start.line, start.col, e.what());
  }
}

} // namespace oneata::detail
