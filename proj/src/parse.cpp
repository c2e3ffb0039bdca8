#include <cctype>

#include "dya/parse.hpp"

namespace dya {

bool is_reserved_word(std::string_view w) {
  return w == "ex" || w == "says" || w == "sent";
}

Parser::Parser(std::vector<Token> tokens, const Signature& sig) : toks_(std::move(tokens)), sig_(sig) {
  if (toks_.empty() || toks_.back().kind != Tok::End) toks_.push_back(Token{});
}

const Token& Parser::peek(std::size_t ahead) const {
  const std::size_t i = std::min(pos_ + ahead, toks_.size() - 1);
  return toks_[i];
}

bool Parser::is_punct(std::string_view p, std::size_t ahead) const {
  const Token& t = peek(ahead);
  return t.kind == Tok::Punct && t.text == p;
}

bool Parser::is_ident(std::string_view word, std::size_t ahead) const {
  const Token& t = peek(ahead);
  return t.kind == Tok::Ident && t.text == word;
}

Token Parser::next() {
  Token t = peek();
  if (pos_ < toks_.size() - 1) ++pos_;
  return t;
}

void Parser::fail(const std::string& msg) const {
  const Token& t = peek();
  throw ParseError(msg + (t.kind == Tok::End ? " at end of input" : " near '" + t.text + "'"), t.line,
                   t.column);
}

void Parser::expect_punct(std::string_view p) {
  if (!is_punct(p)) fail("expected '" + std::string(p) + "'");
  next();
}

std::string Parser::expect_ident() {
  if (peek().kind != Tok::Ident) fail("expected identifier");
  return next().text;
}

void Parser::expect_end() {
  if (!at_end()) fail("unexpected trailing input");
}

Term Parser::identifier_term(const Token& tok) {
  const std::string& name = tok.text;
  if (is_reserved_word(name)) throw ParseError("reserved word '" + name + "' used as a term", tok.line, tok.column);
  if (auto s = sig_.constant_sort(name)) return Term::basic(name, *s);
  if (auto s = generated_sort(name)) return Term::basic(name, *s);
  if (std::isdigit(static_cast<unsigned char>(name[0]))) return Term::basic(name, Sort::Nonce);
  return Term::var(name);
}

Term Parser::primary() {
  if (is_punct("(")) {
    next();
    std::vector<Term> items{term()};
    while (is_punct(",")) {
      next();
      items.push_back(term());
    }
    expect_punct(")");
    Term t = items.back();
    for (std::size_t i = items.size() - 1; i-- > 0;) t = Term::pair(items[i], t);
    return t;
  }
  if (is_punct("{")) {
    next();
    Term body = term();
    expect_punct("}");
    const Token& kt = peek();
    Term key = primary();
    if (!is_key_term(key))
      throw ParseError("encryption key must be key-sorted: " + to_string(key), kt.line, kt.column);
    return Term::enc(body, key);
  }
  if (peek().kind != Tok::Ident) fail("expected term");
  Token tok = next();
  if (is_punct("(")) {
    auto arity = sig_.constructor_arity(tok.text);
    if (!arity) throw ParseError("undeclared constructor '" + tok.text + "'", tok.line, tok.column);
    next();
    std::vector<Term> args;
    if (!is_punct(")")) {
      args.push_back(term());
      while (is_punct(",")) {
        next();
        args.push_back(term());
      }
    }
    expect_punct(")");
    if (static_cast<int>(args.size()) != *arity)
      throw ParseError("constructor '" + tok.text + "' expects " + std::to_string(*arity) + " arguments, got " +
                           std::to_string(args.size()),
                       tok.line, tok.column);
    return Term::app(tok.text, std::move(args));
  }
  return identifier_term(tok);
}

Term Parser::term() { return primary(); }

Assertion Parser::assertion() { return disjunction(); }

Assertion Parser::disjunction() {
  Assertion a = conjunction();
  while (is_punct("\\/")) {
    next();
    a = Assertion::disj(a, conjunction());
  }
  return a;
}

Assertion Parser::conjunction() {
  Assertion a = unary();
  while (is_punct("/\\")) {
    next();
    a = Assertion::conj(a, unary());
  }
  return a;
}

Assertion Parser::unary() {
  if (is_ident("ex")) {
    next();
    std::vector<std::string> vars;
    while (!is_punct(":")) {
      if (is_punct(",")) {
        next();
        continue;
      }
      const Token& t = peek();
      std::string v = expect_ident();
      if (is_reserved_word(v) || sig_.constant_sort(v))
        throw ParseError("cannot bind '" + v + "'", t.line, t.column);
      vars.push_back(v);
    }
    if (vars.empty()) fail("'ex' needs at least one variable");
    expect_punct(":");
    Assertion body = disjunction();
    for (std::size_t i = vars.size(); i-- > 0;) body = Assertion::exists(vars[i], body);
    return body;
  }
  if (is_punct("[")) {
    next();
    Assertion a = disjunction();
    expect_punct("]");
    return a;
  }
  if (is_punct("(")) {
    // "(" opens either a grouped assertion or a pair term
    const std::size_t saved = pos_;
    try {
      next();
      Assertion a = disjunction();
      expect_punct(")");
      return a;
    } catch (const ParseError&) {
      pos_ = saved;
    }
  }
  if (peek().kind == Tok::Ident && (is_ident("says", 1) || is_ident("sent", 1))) {
    Token who = next();
    Term agent = identifier_term(who);
    if (!(agent.is_var() || (agent.is_basic() && agent.sort() == Sort::Agent)))
      throw ParseError("'" + who.text + "' is not an agent", who.line, who.column);
    const bool says = next().text == "says";
    if (says) return Assertion::says(agent, unary());
    if (is_punct("<")) {
      next();
      Assertion body = disjunction();
      expect_punct(">");
      return Assertion::sent_assertion(agent, body);
    }
    return Assertion::sent_term(agent, term());
  }
  if (peek().kind == Tok::Ident && is_punct("(", 1)) {
    const Token& t = peek();
    if (auto arity = sig_.predicate_arity(t.text)) {
      Token name = next();
      next();
      std::vector<Term> args;
      if (!is_punct(")")) {
        args.push_back(term());
        while (is_punct(",")) {
          next();
          args.push_back(term());
        }
      }
      expect_punct(")");
      if (static_cast<int>(args.size()) != *arity)
        throw ParseError("predicate '" + name.text + "' expects " + std::to_string(*arity) + " arguments, got " +
                             std::to_string(args.size()),
                         name.line, name.column);
      return Assertion::pred(name.text, std::move(args));
    }
    if (!sig_.constructor_arity(t.text))
      throw ParseError("undeclared predicate or constructor '" + t.text + "'", t.line, t.column);
  }
  Term lhs = term();
  expect_punct("=");
  Term rhs = term();
  return Assertion::eq(lhs, rhs);
}

Term parse_term(std::string_view text, const Signature& sig) {
  Parser p(tokenize(text), sig);
  Term t = p.term();
  p.expect_end();
  return t;
}

Assertion parse_assertion(std::string_view text, const Signature& sig) {
  Parser p(tokenize(text), sig);
  Assertion a = p.assertion();
  p.expect_end();
  return a;
}

}  // namespace dya
