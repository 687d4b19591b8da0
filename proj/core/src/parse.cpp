#include "mucore/parse.hpp"

#include <cctype>
#include <set>
#include <vector>

namespace mucore {

namespace {

enum class Tok {
  End,
  LParen,
  RParen,
  Not,
  Amp,
  Pipe,
  Arrow,
  Dot,
  KwTrue,
  KwFalse,
  KwNext,
  KwFinally,
  KwGlobally,
  KwUntil,
  KwWeakUntil,
  Ident,
};

struct Token {
  Tok kind;
  std::string text;
  int line;
  int col;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) { advance(); }

  const Token& peek() const { return cur_; }
  const Token& peek2() {
    if (!have_next_) {
      next_ = lex();
      have_next_ = true;
    }
    return next_;
  }

  Token take() {
    Token t = cur_;
    advance();
    return t;
  }

 private:
  void advance() {
    if (have_next_) {
      cur_ = next_;
      have_next_ = false;
    } else {
      cur_ = lex();
    }
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError("parse error at " + std::to_string(line_) + ":" +
                         std::to_string(col_) + ": " + msg,
                     line_, col_);
  }

  Token lex() {
    while (pos_ < src_.size() &&
           (src_[pos_] == ' ' || src_[pos_] == '\t' || src_[pos_] == '\n' ||
            src_[pos_] == '\r')) {
      if (src_[pos_] == '\n') {
        ++line_;
        col_ = 1;
      } else {
        ++col_;
      }
      ++pos_;
    }
    int line = line_, col = col_;
    if (pos_ >= src_.size()) return {Tok::End, "", line, col};

    char c = src_[pos_];
    auto single = [&](Tok k) {
      ++pos_;
      ++col_;
      return Token{k, std::string(1, c), line, col};
    };
    switch (c) {
      case '(':
        return single(Tok::LParen);
      case ')':
        return single(Tok::RParen);
      case '!':
        return single(Tok::Not);
      case '&':
        return single(Tok::Amp);
      case '|':
        return single(Tok::Pipe);
      case '.':
        return single(Tok::Dot);
      case '-':
        if (pos_ + 1 < src_.size() && src_[pos_ + 1] == '>') {
          pos_ += 2;
          col_ += 2;
          return {Tok::Arrow, "->", line, col};
        }
        fail("expected '->' after '-'");
    }

    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '@') {
      size_t start = pos_;
      ++pos_;
      ++col_;
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) ||
              src_[pos_] == '_')) {
        ++pos_;
        ++col_;
      }
      std::string text(src_.substr(start, pos_ - start));
      if (text == "@") fail("'@' must be followed by an identifier");
      Tok k = Tok::Ident;
      if (text == "TRUE") k = Tok::KwTrue;
      else if (text == "FALSE") k = Tok::KwFalse;
      else if (text == "X") k = Tok::KwNext;
      else if (text == "F") k = Tok::KwFinally;
      else if (text == "G") k = Tok::KwGlobally;
      else if (text == "U") k = Tok::KwUntil;
      else if (text == "W") k = Tok::KwWeakUntil;
      return {k, std::move(text), line, col};
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  std::string_view src_;
  size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
  Token cur_;
  Token next_;
  bool have_next_ = false;
};

class Parser {
 public:
  explicit Parser(std::string_view src) : lex_(src) {}

  Formula run() {
    Formula f = parse_expr();
    const Token& t = lex_.peek();
    if (t.kind != Tok::End) fail(t, "unexpected trailing input");
    return f;
  }

 private:
  [[noreturn]] static void fail(const Token& t, const std::string& msg) {
    throw ParseError("parse error at " + std::to_string(t.line) + ":" +
                         std::to_string(t.col) + ": " + msg,
                     t.line, t.col);
  }

  bool at_quantifier() {
    const Token& t = lex_.peek();
    if (t.kind != Tok::Ident || (t.text != "A" && t.text != "E")) return false;
    const Token& u = lex_.peek2();
    return u.kind == Tok::Ident;
  }

  // A quantifier prefix followed by the implication level. Prefix variables
  // must be pairwise distinct within one unbroken chain.
  Formula parse_expr() {
    std::vector<std::pair<bool, std::string>> prefix;
    std::set<std::string> seen;
    while (at_quantifier()) {
      Token q = lex_.take();
      Token v = lex_.take();
      if (v.kind != Tok::Ident) fail(v, "expected quantified variable");
      const Token& dot = lex_.peek();
      if (dot.kind != Tok::Dot) fail(dot, "expected '.' after quantified variable");
      lex_.take();
      if (!seen.insert(v.text).second)
        fail(v, "duplicate quantified variable '" + v.text + "'");
      prefix.emplace_back(q.text == "A", v.text);
    }
    Formula body = parse_implies();
    for (auto it = prefix.rbegin(); it != prefix.rend(); ++it)
      body = it->first ? forall(it->second, body) : exists(it->second, body);
    return body;
  }

  Formula parse_implies() {
    Formula l = parse_or();
    if (lex_.peek().kind == Tok::Arrow) {
      lex_.take();
      Formula r = parse_implies();
      return implies(l, r);
    }
    return l;
  }

  Formula parse_or() {
    Formula l = parse_and();
    while (lex_.peek().kind == Tok::Pipe) {
      lex_.take();
      l = disj(l, parse_and());
    }
    return l;
  }

  Formula parse_and() {
    Formula l = parse_temporal();
    while (lex_.peek().kind == Tok::Amp) {
      lex_.take();
      l = conj(l, parse_temporal());
    }
    return l;
  }

  Formula parse_temporal() {
    Formula l = parse_unary();
    Tok k = lex_.peek().kind;
    if (k == Tok::KwUntil) {
      lex_.take();
      return until(l, parse_temporal());
    }
    if (k == Tok::KwWeakUntil) {
      lex_.take();
      return wuntil(l, parse_temporal());
    }
    return l;
  }

  Formula parse_unary() {
    const Token& t = lex_.peek();
    switch (t.kind) {
      case Tok::Not:
        lex_.take();
        return neg(parse_unary());
      case Tok::KwNext:
        lex_.take();
        return next(parse_unary());
      case Tok::KwFinally:
        lex_.take();
        return eventually(parse_unary());
      case Tok::KwGlobally:
        lex_.take();
        return globally(parse_unary());
      default:
        return parse_primary();
    }
  }

  Formula parse_primary() {
    Token t = lex_.take();
    switch (t.kind) {
      case Tok::KwTrue:
        return tt();
      case Tok::KwFalse:
        return ff();
      case Tok::Ident:
        return prop(t.text);
      case Tok::LParen: {
        Formula f = parse_expr();
        const Token& r = lex_.peek();
        if (r.kind != Tok::RParen) fail(r, "expected ')'");
        lex_.take();
        return f;
      }
      default:
        fail(t, "expected a formula");
    }
  }

  Lexer lex_;
};

}  // namespace

Formula parse(std::string_view text) { return Parser(text).run(); }

Occurrence parse_occurrence(std::string_view text) {
  Occurrence occ;
  if (text == "root" || text.empty()) return occ;
  size_t i = 0;
  while (i < text.size()) {
    char c = text[i];
    if (c == 'l') occ.path.push_back(Step::Left);
    else if (c == 'r') occ.path.push_back(Step::Right);
    else if (c == 'o') occ.path.push_back(Step::Only);
    else throw std::invalid_argument("bad occurrence step '" + std::string(1, c) + "'");
    ++i;
    if (i < text.size()) {
      if (text[i] != '.') throw std::invalid_argument("expected '.' in occurrence path");
      ++i;
    }
  }
  return occ;
}

}  // namespace mucore
