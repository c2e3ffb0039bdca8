#pragma once

#include <deque>
#include <map>
#include <optional>
#include <unordered_map>
#include <vector>

#include "dya/dolev_yao.hpp"
#include "dya/proof.hpp"

namespace dya {

/// Congruence closure over a finite term universe that records why every
/// merge happened, so that any two terms in one class can be given an
/// equality proof.
///
/// A class is *active* when reflexivity of its terms is derivable: an atom
/// known to the Dolev-Yao closure or a variable, a compound whose parts are
/// active, a component of an active pair (or of an active ciphertext whose
/// keys are invertible), or any member of a class with two or more terms.
/// Congruence fires only over active arguments, mirroring the premises of
/// the congruence rules.
class EGraph {
public:
  struct Edge {
    enum Kind : std::uint8_t { None, Hyp, Cong, Proj } kind = None;
    int lhs = -1, rhs = -1;  // the equation this edge justifies, as node ids
    ProofRef hyp;            // Hyp: proof of lhs = rhs
    int p1 = -1, p2 = -1;    // Cong: the two congruent nodes; Proj: the two equal parents
    int index = 0;           // Proj: component
  };
  struct Activation {
    enum Kind : std::uint8_t { None, Atom, Cong, Down, Member } kind = None;
    int other = -1;  // Down: parent node; Member: another node of the class
    int index = 0;
  };

  EGraph() = default;
  EGraph(const DyKnowledge* dy, std::size_t merge_cap) : dy_(dy), merge_cap_(merge_cap) {}

  /// Adds t and its subterms. t must not mention bound variables.
  int add(const Term& t);
  /// Records the hypothesis s = t, justified by `why`.
  void assert_eq(const Term& s, const Term& t, ProofRef why);
  /// Runs congruence closure to a fixpoint (or the merge cap).
  void close();

  std::optional<int> lookup(const Term& t) const;
  /// Node congruent to t: t itself if present, otherwise a node with the same
  /// head whose arguments are equivalent to t's and active.
  std::optional<int> canon(const Term& t) const;

  int find(int n) const;
  bool active_node(int n) const { return active_[find(n)]; }
  const std::vector<int>& members(int n) const { return members_[find(n)]; }
  std::size_t class_size(int n) const { return members_[find(n)].size(); }
  const Term& term(int n) const { return terms_[n]; }
  const std::vector<int>& kids(int n) const { return kids_[n]; }
  std::size_t size() const { return terms_.size(); }
  std::vector<int> roots() const;

  bool bottom() const { return bottom_a_ >= 0; }
  std::pair<int, int> bottom_pair() const { return {bottom_a_, bottom_b_}; }
  bool exhausted() const { return exhausted_; }
  std::size_t merges() const { return merges_; }
  const DyKnowledge& dy() const { return *dy_; }

  /// Path of proof-forest edges from a to b; each edge is returned with the
  /// orientation flag `forward` = edge.lhs is the earlier node on the path.
  std::vector<std::pair<const Edge*, bool>> path(int a, int b) const;
  const Activation& activation(int n) const { return act_[n]; }
  bool proj_enc(int n) const { return enc_ok_[n]; }

private:
  struct SigKey {
    TermKind kind;
    std::string name;
    std::vector<int> kids;
    bool operator==(const SigKey& o) const { return kind == o.kind && name == o.name && kids == o.kids; }
  };
  struct SigHash {
    std::size_t operator()(const SigKey& k) const;
  };
  struct Pending {
    int a, b;
    Edge edge;
  };

  bool all_kids_active(int n) const;
  void activate_class(int root, int node, Activation why);
  void set_node_reason(int n, Activation why);
  void merge(int a, int b, const Edge& e);
  void reroot(int n);
  void touch_parents(int root);
  void check_node(int n);
  bool ground_atom(int n) const;

  const DyKnowledge* dy_ = nullptr;
  std::size_t merge_cap_ = 100000;

  std::vector<Term> terms_;
  std::unordered_map<Term, int, TermHash> index_;
  std::vector<std::vector<int>> kids_;
  std::vector<bool> enc_ok_;

  std::vector<int> uf_;
  std::vector<std::vector<int>> members_;
  std::vector<std::vector<int>> uses_;
  std::vector<bool> active_;
  std::vector<int> basic_;
  std::vector<int> pair_rep_;
  std::vector<int> enc_rep_;
  std::vector<Activation> act_;

  std::vector<int> pf_parent_;
  std::vector<Edge> pf_edge_;

  std::unordered_map<SigKey, int, SigHash> sig_;
  std::deque<Pending> pending_;
  std::deque<int> dirty_;
  std::vector<int> activate_queue_;

  int bottom_a_ = -1, bottom_b_ = -1;
  bool exhausted_ = false;
  std::size_t merges_ = 0;
};

}  // namespace dya
