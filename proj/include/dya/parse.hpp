#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "dya/assertion.hpp"
#include "dya/signature.hpp"
#include "dya/term.hpp"

namespace dya {

class ParseError : public std::runtime_error {
public:
  ParseError(const std::string& msg, int line, int column)
      : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + msg),
        line_(line),
        column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

private:
  int line_;
  int column_;
};

enum class Tok { Ident, Punct, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  int line = 1;
  int column = 1;
};

/// Tokenizes term/assertion/DSL text. '#' starts a comment unless it is part
/// of an identifier (allocator names such as n#0#1).
std::vector<Token> tokenize(std::string_view text, int first_line = 1);

/// Recursive-descent parser over a token stream.
class Parser {
public:
  Parser(std::vector<Token> tokens, const Signature& sig);

  Term term();
  Assertion assertion();

  const Token& peek(std::size_t ahead = 0) const;
  bool at_end() const { return peek().kind == Tok::End; }
  bool is_punct(std::string_view p, std::size_t ahead = 0) const;
  bool is_ident(std::string_view word, std::size_t ahead = 0) const;
  Token next();
  void expect_punct(std::string_view p);
  std::string expect_ident();
  void expect_end();
  [[noreturn]] void fail(const std::string& msg) const;

private:
  Term primary();
  Term identifier_term(const Token& tok);
  Assertion disjunction();
  Assertion conjunction();
  Assertion unary();

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  const Signature& sig_;
};

Term parse_term(std::string_view text, const Signature& sig = {});
Assertion parse_assertion(std::string_view text, const Signature& sig = {});

bool is_reserved_word(std::string_view w);

}  // namespace dya
