#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace dya {

enum class Sort : std::uint8_t { Agent, Nonce, Key };

enum class TermKind : std::uint8_t { Basic, Var, Pair, Enc, App };

std::string_view sort_name(Sort s);

/// Immutable symbolic term. Cheap to copy (shared node), compared structurally.
///
/// `sk(A)` and `vk(A)` are represented as App nodes with the reserved
/// constructor names; they are atomic keys for Dolev-Yao purposes.
class Term {
public:
  Term() = default;

  static Term basic(std::string name, Sort sort);
  static Term var(std::string name);
  static Term pair(Term left, Term right);
  static Term enc(Term body, Term key);
  static Term app(std::string ctor, std::vector<Term> args);
  static Term sk(Term agent);
  static Term vk(Term agent);

  TermKind kind() const { return node_->kind; }
  const std::string& name() const { return node_->name; }
  Sort sort() const { return node_->sort; }
  const std::vector<Term>& args() const { return node_->args; }
  const Term& left() const { return node_->args[0]; }
  const Term& right() const { return node_->args[1]; }
  // Enc accessors
  const Term& body() const { return node_->args[0]; }
  const Term& key() const { return node_->args[1]; }

  bool is_basic() const { return kind() == TermKind::Basic; }
  bool is_var() const { return kind() == TermKind::Var; }
  bool is_pair() const { return kind() == TermKind::Pair; }
  bool is_enc() const { return kind() == TermKind::Enc; }
  bool is_app() const { return kind() == TermKind::App; }
  bool is_key_app() const;
  /// Basic symbols, variables and sk/vk keys.
  bool is_atom() const { return is_basic() || is_var() || is_key_app(); }
  bool is_ground() const { return node_->ground; }
  bool valid() const { return node_ != nullptr; }

  std::size_t hash() const { return node_->hash; }
  std::size_t size() const { return node_->size; }

  friend bool operator==(const Term& a, const Term& b);
  friend std::strong_ordering operator<=>(const Term& a, const Term& b);

private:
  struct Node {
    TermKind kind;
    Sort sort = Sort::Nonce;
    std::string name;
    std::vector<Term> args;
    std::size_t hash = 0;
    std::size_t size = 1;
    bool ground = true;
  };
  explicit Term(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  static Term make(Node n);

  std::shared_ptr<const Node> node_;
};

struct TermHash {
  std::size_t operator()(const Term& t) const { return t.hash(); }
};

using TermSet = std::set<Term>;

inline constexpr std::string_view kSigningKey = "sk";
inline constexpr std::string_view kVerifyKey = "vk";

/// Key terms: Basic of sort Key, a variable, or sk(.)/vk(.).
bool is_key_term(const Term& t);

/// inv(k). Symmetric basic keys and variables are self-inverse;
/// sk(A) and vk(A) are mutually inverse. Non-keys have no inverse.
std::optional<Term> inverse(const Term& k);

/// Syntactic subterms, including the term itself.
TermSet subterms(const Term& t);
void collect_subterms(const Term& t, TermSet& out);

/// Atoms (basics, variables, sk/vk) occurring in t.
void collect_atoms(const Term& t, TermSet& out);
void collect_vars(const Term& t, std::set<std::string>& out);
bool occurs(const Term& needle, const Term& hay);

/// Replace every occurrence of a variable by its image.
Term substitute(const Term& t, const std::function<std::optional<Term>(const std::string&)>& image);

/// Simultaneous replacement of whole subterms (outermost match wins).
Term replace_terms(const Term& t, const std::function<std::optional<Term>(const Term&)>& image);

std::string to_string(const Term& t);

}  // namespace dya

template <>
struct std::hash<dya::Term> {
  std::size_t operator()(const dya::Term& t) const noexcept { return t.hash(); }
};
