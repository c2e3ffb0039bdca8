#include <cctype>

#include "dya/parse.hpp"
#include "dya/signature.hpp"

namespace dya {

std::optional<Sort> Signature::constant_sort(const std::string& name) const {
  auto it = constants.find(name);
  if (it == constants.end()) return std::nullopt;
  return it->second;
}

std::optional<int> Signature::predicate_arity(const std::string& name) const {
  auto it = predicates.find(name);
  if (it == predicates.end()) return std::nullopt;
  return it->second;
}

std::optional<int> Signature::constructor_arity(const std::string& name) const {
  if (name == kSigningKey || name == kVerifyKey) return 1;
  auto it = constructors.find(name);
  if (it == constructors.end()) return std::nullopt;
  return it->second;
}

void Signature::merge(const Signature& other) {
  for (const auto& [n, s] : other.constants) {
    auto it = constants.find(n);
    if (it != constants.end() && it->second != s)
      throw std::runtime_error("constant " + n + " redeclared with another sort");
    constants[n] = s;
  }
  for (const auto& [n, a] : other.predicates) {
    auto it = predicates.find(n);
    if (it != predicates.end() && it->second != a)
      throw std::runtime_error("predicate " + n + " redeclared with another arity");
    predicates[n] = a;
  }
  for (const auto& [n, a] : other.constructors) {
    auto it = constructors.find(n);
    if (it != constructors.end() && it->second != a)
      throw std::runtime_error("constructor " + n + " redeclared with another arity");
    constructors[n] = a;
  }
}

std::optional<Sort> generated_sort(const std::string& name) {
  if (name.size() < 3 || name[1] != '#') return std::nullopt;
  if (name[0] == 'k') return Sort::Key;
  if (name[0] == 'n') return Sort::Nonce;
  return std::nullopt;
}

namespace {
bool ident_start(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return ident_start(c) || c == '\'' || c == '#'; }
}  // namespace

std::vector<Token> tokenize(std::string_view text, int first_line) {
  std::vector<Token> out;
  int line = first_line;
  int col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    }
  };
  while (i < text.size()) {
    const char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '#') {
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }
    Token t;
    t.line = line;
    t.column = col;
    if (ident_start(c)) {
      std::size_t j = i;
      while (j < text.size() && ident_char(text[j])) ++j;
      t.kind = Tok::Ident;
      t.text = std::string(text.substr(i, j - i));
      advance(j - i);
      out.push_back(std::move(t));
      continue;
    }
    if (i + 1 < text.size()) {
      std::string_view two = text.substr(i, 2);
      if (two == "/\\" || two == "\\/") {
        t.kind = Tok::Punct;
        t.text = std::string(two);
        advance(2);
        out.push_back(std::move(t));
        continue;
      }
    }
    static constexpr std::string_view singles = "(){}[],:=<>*@;";
    if (singles.find(c) != std::string_view::npos) {
      t.kind = Tok::Punct;
      t.text = std::string(1, c);
      advance(1);
      out.push_back(std::move(t));
      continue;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", line, col);
  }
  Token end;
  end.kind = Tok::End;
  end.line = line;
  end.column = col;
  out.push_back(end);
  return out;
}

}  // namespace dya
