#include "mwb/parse.hpp"

#include <cctype>
#include <sstream>

namespace mwb {

namespace {

std::string format_message(const std::string& what, std::size_t offset,
                           const std::vector<std::string>& expected) {
  std::ostringstream os;
  os << "syntax error at offset " << offset << ": " << what;
  if (!expected.empty()) {
    os << " (expected ";
    for (std::size_t i = 0; i < expected.size(); ++i) {
      if (i) os << (i + 1 == expected.size() ? " or " : ", ");
      os << expected[i];
    }
    os << ')';
  }
  return os.str();
}

enum class Tok { Ident, K, Not, And, Or, Implies, Iff, LParen, RParen, End };

const char* tok_name(Tok t) {
  switch (t) {
    case Tok::Ident: return "atom";
    case Tok::K: return "'K'";
    case Tok::Not: return "'~'";
    case Tok::And: return "'&'";
    case Tok::Or: return "'|'";
    case Tok::Implies: return "'->'";
    case Tok::Iff: return "'<->'";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::End: return "end of input";
  }
  return "?";
}

struct Token {
  Tok kind;
  std::string text;
  std::size_t offset;
};

std::vector<Token> lex(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    const char c = s[i];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      ++i;
      continue;
    }
    if (c == '#') {
      while (i < s.size() && s[i] != '\n') ++i;
      continue;
    }
    if (c == 'K') {
      out.push_back({Tok::K, "K", i});
      ++i;
      continue;
    }
    if (c >= 'a' && c <= 'z') {
      std::size_t j = i + 1;
      while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_')) ++j;
      std::string name(s.substr(i, j - i));
      if (name == "not" || name == "and" || name == "or") {
        throw ParseError("'" + name + "' is not an operator; use ~ & |", i, {});
      }
      out.push_back({Tok::Ident, std::move(name), i});
      i = j;
      continue;
    }
    if (c == '~') { out.push_back({Tok::Not, "~", i}); ++i; continue; }
    if (c == '&') { out.push_back({Tok::And, "&", i}); ++i; continue; }
    if (c == '|') { out.push_back({Tok::Or, "|", i}); ++i; continue; }
    if (c == '(') { out.push_back({Tok::LParen, "(", i}); ++i; continue; }
    if (c == ')') { out.push_back({Tok::RParen, ")", i}); ++i; continue; }
    if (c == '-' && i + 1 < s.size() && s[i + 1] == '>') {
      out.push_back({Tok::Implies, "->", i});
      i += 2;
      continue;
    }
    if (c == '<' && i + 2 < s.size() && s[i + 1] == '-' && s[i + 2] == '>') {
      out.push_back({Tok::Iff, "<->", i});
      i += 3;
      continue;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", i, {});
  }
  out.push_back({Tok::End, "", s.size()});
  return out;
}

class Parser {
public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  Formula run() {
    Formula f = iff();
    expect(Tok::End);
    return f;
  }

private:
  const Token& peek() const { return toks_[pos_]; }
  Token take() { return toks_[pos_++]; }

  [[noreturn]] void fail(std::vector<Tok> wanted) {
    std::vector<std::string> names;
    names.reserve(wanted.size());
    for (Tok t : wanted) names.push_back(tok_name(t));
    throw ParseError(std::string("unexpected ") + tok_name(peek().kind), peek().offset, std::move(names));
  }

  void expect(Tok t) {
    if (peek().kind != t) fail({t});
    take();
  }

  Formula iff() {
    Formula l = implies();
    if (peek().kind == Tok::Iff) {
      take();
      Formula r = implies();
      if (peek().kind == Tok::Iff) fail({Tok::End, Tok::RParen});  // <-> chains need parentheses
      return Formula::conjunction(Formula::implication(l, r), Formula::implication(r, l));
    }
    return l;
  }

  Formula implies() {
    Formula l = disj();
    if (peek().kind == Tok::Implies) {
      take();
      return Formula::implication(std::move(l), implies());
    }
    return l;
  }

  Formula disj() {
    Formula f = conj();
    while (peek().kind == Tok::Or) {
      take();
      f = Formula::disjunction(std::move(f), conj());
    }
    return f;
  }

  Formula conj() {
    Formula f = unary();
    while (peek().kind == Tok::And) {
      take();
      f = Formula::conjunction(std::move(f), unary());
    }
    return f;
  }

  Formula unary() {
    switch (peek().kind) {
      case Tok::Not:
        take();
        return Formula::negation(unary());
      case Tok::K:
        take();
        return Formula::know(unary());
      case Tok::Ident:
        return Formula::atom(take().text);
      case Tok::LParen: {
        take();
        Formula f = iff();
        expect(Tok::RParen);
        return f;
      }
      default:
        fail({Tok::Ident, Tok::K, Tok::Not, Tok::LParen});
    }
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

}  // namespace

ParseError::ParseError(std::string message, std::size_t offset, std::vector<std::string> expected)
    : std::runtime_error(format_message(message, offset, expected)),
      offset_(offset),
      expected_(std::move(expected)) {}

Formula parse(std::string_view text) { return Parser(lex(text)).run(); }

}  // namespace mwb
