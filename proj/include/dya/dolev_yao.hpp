#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dya/term.hpp"

namespace dya {

enum class DyRule : std::uint8_t { Ax, Var, Pair, Split, Enc, Dec, App };

std::string_view dy_rule_name(DyRule r);

struct DyProof {
  DyRule rule = DyRule::Ax;
  Term conclusion;
  std::vector<DyProof> premises;
};

/// Analysis closure of a term set, with enough bookkeeping to rebuild proofs.
/// Variables are treated as derivable (the assertion rules assume X |- x).
class DyKnowledge {
public:
  DyKnowledge() = default;
  explicit DyKnowledge(const TermSet& base);

  void add(const Term& t);
  void add_all(const TermSet& ts);

  const TermSet& base() const { return base_; }
  /// Everything reachable from the base by split and dec.
  const TermSet& analyzed() const { return analyzed_; }

  bool derivable(const Term& t) const;
  std::optional<DyProof> prove(const Term& t) const;

private:
  struct Origin {
    DyRule rule;
    Term from;  // pair or ciphertext for Split/Dec
  };
  void close();
  bool learn(const Term& t, Origin o);
  DyProof analysis_proof(const Term& t) const;

  TermSet base_;
  TermSet analyzed_;
  std::map<Term, Origin> origin_;
  std::vector<Term> locked_;  // ciphertexts whose decryption key is not yet known
  std::vector<Term> pending_;
};

/// Closure of X under split and dec.
TermSet dy_saturate(const TermSet& X);

/// Decide X |- t; on success returns a proof tree.
std::optional<DyProof> dy_derive(const TermSet& X, const Term& t);

/// Replays a proof against X, checking each node against its rule schema.
bool check_dy_proof(const TermSet& X, const DyProof& p, std::string* why = nullptr);

std::string to_string(const DyProof& p, int indent = 0);

}  // namespace dya
