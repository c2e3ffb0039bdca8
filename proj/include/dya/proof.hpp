#pragma once

#include <memory>
#include <string>
#include <vector>

#include "dya/assertion.hpp"
#include "dya/dolev_yao.hpp"

namespace dya {

/// Rules of the assertion calculus, plus app-cong for uninterpreted
/// constructors.
enum class Rule : std::uint8_t {
  Refl,
  Ax,
  Subst,
  Sym,
  Trans,
  PairProj,
  PairCong,
  EncProj,
  EncCong,
  AppCong,
  Bot,
  Says,
  AndI,
  AndE,
  Strip,
  OrI,
  OrE,
  ExI,
  ExE,
};

std::string_view rule_name(Rule r);
/// The rules that may not be used for communicated assertions.
inline bool is_unsafe(Rule r) { return r == Rule::OrE || r == Rule::ExE; }

struct ProofNode;
using ProofRef = std::shared_ptr<const ProofNode>;

/// One rule application. Side evidence:
///  - Refl: dy[0] derives the atom
///  - EncProj: dy[0], dy[1] derive the two inverse keys
///  - Says: dy[0] derives sk(A)
///  - AndE/OrI/PairProj/EncProj: index picks the component
///  - ExI: term is the witness;  ExE: term is the fresh variable
///  - OrE: premises are (disjunction, left case, right case); the cases are
///    proved with the respective disjunct added to the hypotheses
///  - ExE: premises are (existential, body); the body is proved with the
///    instance at `term` added
struct ProofNode {
  Rule rule;
  Assertion conclusion;
  std::vector<ProofRef> premises;
  std::vector<DyProof> dy;
  Term term;
  int index = 0;
};

ProofRef make_proof(Rule r, Assertion concl, std::vector<ProofRef> premises = {}, std::vector<DyProof> dy = {},
                    Term term = {}, int index = 0);

/// Indented, one rule per line, root first.
std::string to_string(const ProofRef& p);

std::size_t proof_size(const ProofRef& p);
bool proof_uses(const ProofRef& p, Rule r);
bool proof_uses_unsafe(const ProofRef& p);

}  // namespace dya
