#include "dya/sequent_file.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "dya/parse.hpp"
#include "text_util.hpp"

namespace dya {

namespace {

using detail::join;
using detail::split_list;
using detail::strip_comment;
using detail::trim;

bool valid_ident(const std::string& s) {
  if (s.empty()) return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
  });
}

}  // namespace

bool parse_declaration(std::string_view raw, int line_no, Signature& sig) {
  const std::string line = trim(strip_comment(raw));
  const auto sp = line.find_first_of(" \t");
  const std::string word = line.substr(0, sp);
  static const std::map<std::string, Sort> sorts{{"agents", Sort::Agent}, {"nonces", Sort::Nonce}, {"keys", Sort::Key}};
  const bool arity = word == "predicates" || word == "constructors";
  if (!sorts.count(word) && !arity) return false;
  const std::string rest = sp == std::string::npos ? std::string() : line.substr(sp);
  for (const std::string& item : split_list(rest)) {
    if (!arity) {
      if (!valid_ident(item) || is_reserved_word(item)) throw ParseError("bad name '" + item + "'", line_no, 1);
      sig.add_constant(item, sorts.at(word));
      continue;
    }
    const auto slash = item.find('/');
    const std::string name = trim(item.substr(0, slash));
    int n = -1;
    if (slash != std::string::npos) {
      try {
        n = std::stoi(item.substr(slash + 1));
      } catch (const std::exception&) {
        n = -1;
      }
    }
    if (!valid_ident(name) || n < 0) throw ParseError("expected name/arity, got '" + item + "'", line_no, 1);
    if (word == "predicates") {
      sig.add_predicate(name, n);
    } else {
      if (name == kSigningKey || name == kVerifyKey) throw ParseError("'" + name + "' is reserved", line_no, 1);
      sig.add_constructor(name, n);
    }
  }
  return true;
}

std::string print_declarations(const Signature& sig) {
  std::ostringstream os;
  const std::pair<const char*, Sort> groups[] = {{"agents", Sort::Agent}, {"nonces", Sort::Nonce}, {"keys", Sort::Key}};
  for (const auto& [word, sort] : groups) {
    std::vector<std::string> names;
    for (const auto& [n, s] : sig.constants)
      if (s == sort) names.push_back(n);
    if (!names.empty()) os << word << ' ' << join(names, [](const std::string& x) { return x; }) << '\n';
  }
  auto arities = [&](const char* word, const std::map<std::string, int>& m) {
    if (m.empty()) return;
    std::vector<std::string> names;
    for (const auto& [n, a] : m) names.push_back(n + "/" + std::to_string(a));
    os << word << ' ' << join(names, [](const std::string& x) { return x; }) << '\n';
  };
  arities("predicates", sig.predicates);
  arities("constructors", sig.constructors);
  return os.str();
}

SequentFile parse_sequent_file(std::string_view text) {
  SequentFile f;
  enum { Decls, Terms, Assertions, Goal } section = Decls;
  bool have_goal = false;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = trim(strip_comment(raw));
    if (line.empty()) continue;
    if (line == "terms:") {
      section = Terms;
      continue;
    }
    if (line == "assertions:") {
      section = Assertions;
      continue;
    }
    if (line == "goal:") {
      section = Goal;
      continue;
    }
    Parser p(tokenize(line, line_no), f.sig);
    switch (section) {
      case Decls:
        if (!parse_declaration(line, line_no, f.sig)) throw ParseError("expected a declaration or section header", line_no, 1);
        break;
      case Terms: {
        Term t = p.term();
        p.expect_end();
        if (!t.is_ground()) throw ParseError("terms must be ground: " + to_string(t), line_no, 1);
        f.sequent.X.insert(t);
        break;
      }
      case Assertions: {
        Assertion a = p.assertion();
        p.expect_end();
        f.sequent.Phi.insert(a);
        break;
      }
      case Goal:
        if (have_goal) throw ParseError("only one goal allowed", line_no, 1);
        f.sequent.goal = p.assertion();
        p.expect_end();
        have_goal = true;
        break;
    }
  }
  if (!have_goal) throw ParseError("missing goal: section", line_no, 1);
  return f;
}

std::string print_sequent_file(const SequentFile& f) {
  std::ostringstream os;
  os << print_declarations(f.sig);
  os << "terms:\n";
  for (const Term& t : f.sequent.X) os << "  " << to_string(t) << '\n';
  os << "assertions:\n";
  for (const Assertion& a : f.sequent.Phi) os << "  " << to_string(a) << '\n';
  os << "goal:\n  " << to_string(f.sequent.goal) << '\n';
  return os.str();
}

}  // namespace dya
