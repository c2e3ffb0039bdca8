#pragma once

#include <string>

#include "dya/assertion.hpp"
#include "dya/proof.hpp"

namespace dya {

/// Replays every rule of a proof tree against the sequent (X, Phi), without
/// trusting the prover. On failure `why` names the offending node.
bool check_proof(const TermSet& X, const AssertionSet& phi, const ProofRef& proof, std::string* why = nullptr);

/// As above, and also requires the root to conclude `goal`.
bool check_proof(const TermSet& X, const AssertionSet& phi, const ProofRef& proof, const Assertion& goal,
                 std::string* why = nullptr);

}  // namespace dya
