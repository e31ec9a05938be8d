#include "isynth/parser.hpp"

#include <cctype>
#include <sstream>

#include "isynth/errors.hpp"

namespace isynth {

ParseError::ParseError(std::size_t line, std::size_t column, std::vector<std::string> expected, const std::string& found)
    : Error([&] {
        std::ostringstream os;
        os << "parse error at line " << line << ", column " << column << ": expected ";
        for (std::size_t i = 0; i < expected.size(); ++i) os << (i ? ", " : "") << expected[i];
        os << "; found " << found;
        return os.str();
      }()),
      line_(line),
      column_(column),
      expected_(std::move(expected)) {}

RawFormula RawFormula::unary(Kind k, RawFormula c) {
  RawFormula r{k, 0, {}};
  r.children.push_back(std::move(c));
  return r;
}

RawFormula RawFormula::binary(Kind k, RawFormula l, RawFormula r) {
  RawFormula out{k, 0, {}};
  out.children.push_back(std::move(l));
  out.children.push_back(std::move(r));
  return out;
}

namespace {

enum class Tok { True, False, LParen, RParen, Not, And, Or, Implies, Iff, Next, WeakNext, Until, Release, Eventually, Always, Ident, End };

struct Token {
  Tok kind;
  std::string text;
  std::size_t line;
  std::size_t column;
};

std::string describe(const Token& t) { return t.kind == Tok::End ? "end of input" : "'" + t.text + "'"; }

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skip();
      std::size_t l = line_, c = col_;
      if (pos_ >= src_.size()) {
        out.push_back({Tok::End, "", l, c});
        return out;
      }
      char ch = src_[pos_];
      auto single = [&](Tok k, std::size_t len) {
        out.push_back({k, std::string(src_.substr(pos_, len)), l, c});
        advance(len);
      };
      if (ch == '(') single(Tok::LParen, 1);
      else if (ch == ')') single(Tok::RParen, 1);
      else if (ch == '!') single(Tok::Not, 1);
      else if (ch == '&') single(Tok::And, 1);
      else if (ch == '|') single(Tok::Or, 1);
      else if (src_.substr(pos_, 2) == "->") single(Tok::Implies, 2);
      else if (src_.substr(pos_, 3) == "<->") single(Tok::Iff, 3);
      else if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') out.push_back(ident(l, c));
      else throw ParseError(l, c, {"formula"}, "'" + std::string(1, ch) + "'");
    }
  }

 private:
  Token ident(std::size_t l, std::size_t c) {
    std::size_t start = pos_;
    while (pos_ < src_.size()) {
      char ch = src_[pos_];
      bool ok = std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' ||
                (ch == '-' && !(pos_ + 1 < src_.size() && src_[pos_ + 1] == '>'));
      if (!ok) break;
      advance(1);
    }
    std::string word(src_.substr(start, pos_ - start));
    Tok k = Tok::Ident;
    if (word == "true") k = Tok::True;
    else if (word == "false") k = Tok::False;
    else if (word == "X") k = Tok::Next;
    else if (word == "N") k = Tok::WeakNext;
    else if (word == "U") k = Tok::Until;
    else if (word == "R") k = Tok::Release;
    else if (word == "F") k = Tok::Eventually;
    else if (word == "G") k = Tok::Always;
    return {k, word, l, c};
  }

  void skip() {
    while (pos_ < src_.size()) {
      char ch = src_[pos_];
      if (ch == '#') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance(1);
      } else if (std::isspace(static_cast<unsigned char>(ch))) {
        advance(1);
      } else {
        break;
      }
    }
  }

  void advance(std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
      if (src_[pos_] == '\n') {
        ++line_;
        col_ = 1;
      } else {
        ++col_;
      }
      ++pos_;
    }
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
};

class Parser {
 public:
  Parser(std::vector<Token> toks, Vocabulary& vocab, AtomPolicy policy)
      : toks_(std::move(toks)), vocab_(vocab), policy_(policy) {}

  RawFormula run() {
    RawFormula f = iff();
    if (peek().kind != Tok::End) fail({"'<->'", "'->'", "'|'", "'&'", "'U'", "'R'", "end of input"});
    return f;
  }

 private:
  using K = RawFormula::Kind;

  const Token& peek() const { return toks_[pos_]; }
  Token take() { return toks_[pos_++]; }
  bool accept(Tok k) {
    if (peek().kind != k) return false;
    ++pos_;
    return true;
  }
  [[noreturn]] void fail(std::vector<std::string> expected) const {
    throw ParseError(peek().line, peek().column, std::move(expected), describe(peek()));
  }

  RawFormula iff() {
    RawFormula l = implies();
    if (accept(Tok::Iff)) return RawFormula::binary(K::Iff, std::move(l), iff());
    return l;
  }

  RawFormula implies() {
    RawFormula l = disjunction();
    if (accept(Tok::Implies)) return RawFormula::binary(K::Implies, std::move(l), implies());
    return l;
  }

  RawFormula disjunction() {
    RawFormula l = conjunction();
    while (accept(Tok::Or)) l = RawFormula::binary(K::Or, std::move(l), conjunction());
    return l;
  }

  RawFormula conjunction() {
    RawFormula l = temporal();
    while (accept(Tok::And)) l = RawFormula::binary(K::And, std::move(l), temporal());
    return l;
  }

  RawFormula temporal() {
    RawFormula l = unary();
    if (accept(Tok::Until)) return RawFormula::binary(K::Until, std::move(l), temporal());
    if (accept(Tok::Release)) return RawFormula::binary(K::Release, std::move(l), temporal());
    return l;
  }

  RawFormula unary() {
    switch (peek().kind) {
      case Tok::Not: take(); return RawFormula::unary(K::Not, unary());
      case Tok::Next: take(); return RawFormula::unary(K::Next, unary());
      case Tok::WeakNext: take(); return RawFormula::unary(K::WeakNext, unary());
      case Tok::Eventually: take(); return RawFormula::unary(K::Eventually, unary());
      case Tok::Always: take(); return RawFormula::unary(K::Always, unary());
      default: return primary();
    }
  }

  RawFormula primary() {
    switch (peek().kind) {
      case Tok::True: take(); return RawFormula::leaf(K::True);
      case Tok::False: take(); return RawFormula::leaf(K::False);
      case Tok::Ident: {
        Token t = take();
        AtomId id = policy_ == AtomPolicy::Register ? vocab_.intern(t.text) : vocab_.at(t.text);
        return RawFormula::atom_of(id);
      }
      case Tok::LParen: {
        take();
        RawFormula f = iff();
        if (!accept(Tok::RParen)) fail({"')'"});
        return f;
      }
      default:
        fail({"'('", "'!'", "'X'", "'N'", "'F'", "'G'", "'true'", "'false'", "identifier"});
    }
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  Vocabulary& vocab_;
  AtomPolicy policy_;
};

ltlf::Formula nnf(ltlf::FormulaFactory& ff, const RawFormula& r, bool negated) {
  using K = RawFormula::Kind;
  auto sub = [&](std::size_t i, bool neg) { return nnf(ff, r.children[i], neg); };
  switch (r.kind) {
    case K::True: return negated ? ff.bottom() : ff.top();
    case K::False: return negated ? ff.top() : ff.bottom();
    case K::Atom: return ff.literal(r.atom, !negated);
    case K::Not: return sub(0, !negated);
    case K::And: return negated ? ff.disj(sub(0, true), sub(1, true)) : ff.conj(sub(0, false), sub(1, false));
    case K::Or: return negated ? ff.conj(sub(0, true), sub(1, true)) : ff.disj(sub(0, false), sub(1, false));
    case K::Implies: return negated ? ff.conj(sub(0, false), sub(1, true)) : ff.disj(sub(0, true), sub(1, false));
    case K::Iff:
      if (negated) return ff.disj(ff.conj(sub(0, false), sub(1, true)), ff.conj(sub(0, true), sub(1, false)));
      return ff.disj(ff.conj(sub(0, false), sub(1, false)), ff.conj(sub(0, true), sub(1, true)));
    case K::Next: return negated ? ff.weak_next(sub(0, true)) : ff.next(sub(0, false));
    case K::WeakNext: return negated ? ff.next(sub(0, true)) : ff.weak_next(sub(0, false));
    case K::Until: return negated ? ff.release(sub(0, true), sub(1, true)) : ff.until(sub(0, false), sub(1, false));
    case K::Release: return negated ? ff.until(sub(0, true), sub(1, true)) : ff.release(sub(0, false), sub(1, false));
    case K::Eventually: return negated ? ff.always(sub(0, true)) : ff.eventually(sub(0, false));
    case K::Always: return negated ? ff.eventually(sub(0, true)) : ff.always(sub(0, false));
  }
  return ff.top();
}

}  // namespace

RawFormula parse(std::string_view text, Vocabulary& vocab, AtomPolicy policy) {
  return Parser(Lexer(text).run(), vocab, policy).run();
}

ltlf::Formula to_nnf(ltlf::FormulaFactory& ff, const RawFormula& raw) { return nnf(ff, raw, false); }

ltlf::Formula parse_goal(std::string_view text, Vocabulary& vocab, ltlf::FormulaFactory& ff, AtomPolicy policy) {
  return ltlf::simplify(ff, to_nnf(ff, parse(text, vocab, policy)));
}

}  // namespace isynth
