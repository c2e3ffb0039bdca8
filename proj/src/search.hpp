#pragma once

// Goal-directed proof search inside one disjunction-free branch.

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "dya/engine.hpp"

namespace dya::detail {

struct Leaf {
  std::vector<Fact> facts;
  std::map<std::string, std::vector<int>> preds;
  std::vector<int> says, sent_t, sent_a, exists, ors;
  EGraph graph;
};

Leaf make_leaf(std::vector<Fact> facts, const TermSet& X, const DyKnowledge& dy, std::size_t merge_cap);

class Searcher {
public:
  Searcher(const Leaf& leaf, const EGraph& graph, const DyKnowledge& dy, std::size_t step_cap);

  /// Phase one: is the goal derivable in this branch?
  bool decide(const Assertion& goal);
  /// Phase two: a proof of a goal for which decide() returned true.
  ProofRef build(const Assertion& goal);

  bool exhausted() const { return exhausted_; }
  std::size_t steps() const { return steps_; }

private:
  using K = std::function<bool()>;

  bool tick();
  void reset();
  int new_meta();
  void drop_meta();
  static Term meta_term(int id);
  static int meta_id(const Term& t);
  Term resolve(const Term& t) const;

  bool goal(const Assertion& a, const K& k);
  bool ax(const Assertion& g, const K& k);
  bool match(const Assertion& h, const Assertion& g, const K& k);
  bool match_agent(const Term& h, const Term& g, const K& k);
  bool match_terms(const Term& h, const Term& g, const K& k);
  bool match_list(const std::vector<Term>& h, const std::vector<Term>& g, std::size_t i, const K& k);
  bool eq(const Term& s, const Term& t, const K& k);
  bool eq_meta(const Term& m, const Term& t, const K& k);
  bool eq_closed_open(const Term& s, const Term& t, const K& k);
  bool eq_args(const Term& s, const Term& t, std::size_t i, const K& k);
  bool says_intro(const Assertion& g, const K& k);
  bool bind(const Term& meta, const Term& value, const K& k);
  bool defer(const Term& meta, const K& k);
  bool finish(std::size_t i);
  bool witness_ok(const Term& t) const;
  const std::optional<Term>& candidate();
  const std::vector<Term>& agents();
  const std::vector<int>* facts_for(const Assertion& g) const;

  bool closed_eq(const Term& s, const Term& t);
  std::optional<Term> find_witness(const Assertion& ex);

  // proof construction
  ProofRef eq_proof(const Term& s, const Term& t);
  ProofRef to_node(const Term& s, int n);
  ProofRef refl_node(int n);
  ProofRef refl_atom(const Term& t);
  ProofRef explain(int a, int b);
  ProofRef edge_proof(const EGraph::Edge& e);
  ProofRef cong(const Term& s, const Term& t, std::vector<ProofRef> kids);
  ProofRef ax_proof(const Assertion& g);
  std::optional<ProofRef> try_ax_proof(const Assertion& g);
  ProofRef chain(std::vector<ProofRef> steps) const;
  ProofRef refl_term(const Term& t);
  bool closed_eq_impl(const Term& s, const Term& t);
  bool walk_term(const Term& h, const Term& g, int limit, int& count, Term& out,
                 std::vector<std::pair<Term, Term>>* rw);
  bool walk_assertion(const Assertion& h, const Assertion& g, int limit, int& count, Assertion& out,
                      std::vector<std::pair<Term, Term>>* rw);
  DyProof dy_proof(const Term& t) const;

  const Leaf& leaf_;
  const EGraph& g_;
  const DyKnowledge& dy_;
  std::size_t cap_;
  std::size_t steps_ = 0;
  bool exhausted_ = false;

  std::vector<Term> meta_val_;
  std::vector<bool> meta_set_;
  std::vector<int> deferred_;
  int capture_ = -1;
  Term captured_;

  bool have_candidate_ = false;
  std::optional<Term> candidate_;
  std::optional<std::vector<Term>> agents_;
  // Decided equalities with their completion order. A pair under evaluation
  // counts as unproved; false answers that leaned on that are not cached.
  struct EqEntry {
    bool holds;
    std::size_t stamp;
  };
  std::map<std::pair<Term, Term>, EqEntry> eq_memo_;
  std::set<std::pair<Term, Term>> eq_open_;
  bool eq_leaned_ = false;
  std::size_t eq_clock_ = 0;
  /// Holds and was settled before `limit`; keeps proof rebuilding well-founded.
  bool eq_before(const Term& s, const Term& t, std::size_t limit);
  std::map<int, ProofRef> refl_memo_;
  std::map<const EGraph::Edge*, ProofRef> edge_memo_;
};

}  // namespace dya::detail
