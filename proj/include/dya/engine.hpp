#pragma once

#include <memory>
#include <set>
#include <string>
#include <vector>

#include "dya/assertion.hpp"
#include "dya/dolev_yao.hpp"
#include "dya/egraph.hpp"
#include "dya/proof.hpp"

namespace dya {

struct SearchBudget {
  int witness_depth = 2;
  std::size_t branch_cap = 4096;
  std::size_t merge_cap = 100000;
  /// Elementary search steps per branch before giving up.
  std::size_t step_cap = 400000;
};

enum class Mode { Full, Safe };

struct Sequent {
  TermSet X;
  AssertionSet Phi;
  Assertion goal;
};

struct Verdict {
  bool derivable = false;
  /// Set only when not derivable: some cap was hit, so the negative answer
  /// is not definitive.
  bool exhausted = false;
  std::string note;
  ProofRef proof;
  std::size_t branches = 0;
  std::size_t witnesses = 0;
  int witness_depth = 0;
  explicit operator bool() const { return derivable; }
};

struct Fact {
  Assertion a;
  ProofRef proof;
};

/// Result of witness closure: Pi and the existential -> witness mapping.
struct WitnessClosure {
  AssertionSet pi;
  std::vector<std::pair<Assertion, std::string>> ledger;
};

/// Closes Phi under and-elimination, strip and one fresh witness per
/// existential (disjunctions are not entered).
WitnessClosure witness_close(const AssertionSet& phi, const std::set<std::string>& reserved = {});

class BranchOverflow : public std::runtime_error {
public:
  explicit BranchOverflow(std::size_t n)
      : std::runtime_error("case split exceeds branch cap (" + std::to_string(n) + "+ branches)"), count(n) {}
  std::size_t count;
};

/// Splits every reachable disjunction (after and-e/strip flattening).
/// Throws BranchOverflow when more than `cap` branches arise.
std::vector<AssertionSet> case_split(const AssertionSet& pi, std::size_t cap = 4096);

struct Classes {
  std::shared_ptr<const DyKnowledge> dy;
  EGraph graph;
  /// Representative-sorted classes, each sorted, for display and tests.
  std::vector<std::vector<Term>> list() const;
  bool same(const Term& a, const Term& b) const;
};

/// Congruence closure of the equalities of a (disjunction-free) branch over
/// the subterms of X, the branch and any extra terms.
Classes congruence_close(const TermSet& X, const AssertionSet& branch, const TermSet& extra = {},
                         std::size_t merge_cap = 100000);
bool check_bottom(const Classes& c);

/// Expansion of (X, Phi) prepared once and reused for many goals.
class Context {
public:
  Context(TermSet X, AssertionSet phi, Mode mode, SearchBudget budget = {}, std::set<std::string> reserved = {});
  ~Context();
  Context(const Context&) = delete;
  Context& operator=(const Context&) = delete;

  Verdict prove(const Assertion& goal) const;

  const TermSet& X() const { return X_; }
  const AssertionSet& phi() const { return phi_; }
  Mode mode() const { return mode_; }
  const DyKnowledge& dy() const { return *dy_; }
  std::size_t branches() const;
  bool bottom_everywhere() const;

  struct Tree;

private:
  TermSet X_;
  AssertionSet phi_;
  Mode mode_;
  SearchBudget budget_;
  std::set<std::string> reserved_;
  std::set<std::string> witness_names_;
  std::shared_ptr<const DyKnowledge> dy_;
  std::unique_ptr<Tree> tree_;
  bool overflow_ = false;
  std::size_t leaves_ = 0;
};

Verdict derive(const Sequent& s, const SearchBudget& budget = {});
Verdict derive_safe(const Sequent& s, const SearchBudget& budget = {});
Verdict derive(const TermSet& X, const AssertionSet& phi, const Assertion& goal, Mode mode = Mode::Full,
               const SearchBudget& budget = {});

}  // namespace dya
