#pragma once

#include <functional>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "dya/term.hpp"

namespace dya {

enum class AssertionKind : std::uint8_t { Eq, Pred, And, Or, Exists, Says, SentT, SentA };

/// Assertions of the positive existential fragment.
///
/// Binders are kept in a canonical form: an existential whose body has binder
/// height h binds the variable "%<h+1>". Alpha-equivalent assertions are
/// therefore structurally equal, and substituting terms free of '%' variables
/// can never capture. The user-facing binder name survives as a printing hint.
class Assertion {
public:
  Assertion() = default;

  static Assertion eq(Term lhs, Term rhs);
  static Assertion pred(std::string name, std::vector<Term> args);
  static Assertion conj(Assertion l, Assertion r);
  static Assertion disj(Assertion l, Assertion r);
  static Assertion exists(const std::string& var, Assertion body);
  static Assertion exists(const std::string& var, Assertion body, std::string hint);
  static Assertion says(Term agent, Assertion body);
  static Assertion sent_term(Term agent, Term t);
  static Assertion sent_assertion(Term agent, Assertion a);

  AssertionKind kind() const { return node_->kind; }
  /// Predicate name, or the canonical binder name for Exists.
  const std::string& name() const { return node_->name; }
  const std::string& hint() const { return node_->hint; }
  const std::vector<Term>& terms() const { return node_->terms; }
  const std::vector<Assertion>& subs() const { return node_->subs; }

  const Term& lhs() const { return node_->terms[0]; }
  const Term& rhs() const { return node_->terms[1]; }
  const Term& agent() const { return node_->terms[0]; }
  const Term& sent() const { return node_->terms[1]; }
  const Assertion& left() const { return node_->subs[0]; }
  const Assertion& right() const { return node_->subs[1]; }
  const Assertion& body() const { return node_->subs[0]; }

  bool is(AssertionKind k) const { return node_->kind == k; }
  /// No free variables.
  bool is_ground() const { return node_->closed; }
  int height() const { return node_->height; }
  std::size_t hash() const { return node_->hash; }
  bool valid() const { return node_ != nullptr; }

  friend bool operator==(const Assertion& a, const Assertion& b);
  friend std::strong_ordering operator<=>(const Assertion& a, const Assertion& b);

private:
  struct Node {
    AssertionKind kind;
    std::string name;
    std::string hint;
    std::vector<Term> terms;
    std::vector<Assertion> subs;
    std::size_t hash = 0;
    int height = 0;
    bool closed = true;
  };
  explicit Assertion(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  static Assertion make(Node n);
  std::shared_ptr<const Node> node_;
};

using AssertionSet = std::set<Assertion>;
using TermMap = std::map<std::string, Term>;

inline bool is_bound_name(const std::string& v) { return !v.empty() && v[0] == '%'; }

std::set<std::string> free_vars(const Assertion& a);
void collect_free_vars(const Assertion& a, std::set<std::string>& out);
/// Every variable name occurring, bound or free.
void collect_all_vars(const Assertion& a, std::set<std::string>& out);

/// Capture-avoiding simultaneous substitution of free variables.
Assertion substitute(const Assertion& a, const TermMap& sigma);
Assertion substitute_var(const Assertion& a, const std::string& var, const Term& t);

/// Instance of an existential body: body[bound := t].
Assertion instantiate(const Assertion& exists, const Term& t);

/// Apply f to every maximal term position (equality sides, predicate
/// arguments, sent terms, agents), rebuilding the assertion.
Assertion map_terms(const Assertion& a, const std::function<Term(const Term&)>& f);
/// Visit every term position; `bound` is the set of binder names in scope.
void visit_terms(const Assertion& a,
                 const std::function<void(const Term&, const std::set<std::string>& bound)>& f);
/// Subterms of every term position that mention no bound variable.
void collect_closed_subterms(const Assertion& a, TermSet& out);

/// Terms revealed by the assertion: equality sides and predicate arguments,
/// through every connective. Terms mentioning a bound variable are hidden
/// witnesses and are not reported.
TermSet reveals(const Assertion& a);

bool contains_kind(const Assertion& a, AssertionKind k);

std::string to_string(const Assertion& a);

}  // namespace dya

template <>
struct std::hash<dya::Assertion> {
  std::size_t operator()(const dya::Assertion& a) const noexcept { return a.hash(); }
};
