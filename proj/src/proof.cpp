#include "dya/proof.hpp"

#include <unordered_set>

namespace dya {

std::string_view rule_name(Rule r) {
  switch (r) {
    case Rule::Refl: return "refl";
    case Rule::Ax: return "ax";
    case Rule::Subst: return "subst";
    case Rule::Sym: return "sym";
    case Rule::Trans: return "trans";
    case Rule::PairProj: return "pair-proj";
    case Rule::PairCong: return "pair-cong";
    case Rule::EncProj: return "enc-proj";
    case Rule::EncCong: return "enc-cong";
    case Rule::AppCong: return "app-cong";
    case Rule::Bot: return "bot";
    case Rule::Says: return "says";
    case Rule::AndI: return "and-i";
    case Rule::AndE: return "and-e";
    case Rule::Strip: return "strip";
    case Rule::OrI: return "or-i";
    case Rule::OrE: return "or-e";
    case Rule::ExI: return "ex-i";
    case Rule::ExE: return "ex-e";
  }
  return "?";
}

ProofRef make_proof(Rule r, Assertion concl, std::vector<ProofRef> premises, std::vector<DyProof> dy, Term term,
                    int index) {
  return std::make_shared<const ProofNode>(
      ProofNode{r, std::move(concl), std::move(premises), std::move(dy), std::move(term), index});
}

namespace {

void print(const ProofRef& p, int depth, std::string& out) {
  out.append(static_cast<std::size_t>(depth) * 2, ' ');
  out += rule_name(p->rule);
  switch (p->rule) {
    case Rule::AndE:
    case Rule::OrI:
    case Rule::PairProj:
    case Rule::EncProj: out += "." + std::to_string(p->index); break;
    case Rule::ExI: out += " [" + to_string(p->term) + "]"; break;
    case Rule::ExE: out += " [fresh " + to_string(p->term) + "]"; break;
    default: break;
  }
  out += "  ";
  out += to_string(p->conclusion);
  out += '\n';
  for (const ProofRef& q : p->premises) print(q, depth + 1, out);
}

}  // namespace

std::string to_string(const ProofRef& p) {
  std::string out;
  if (p) print(p, 0, out);
  return out;
}

std::size_t proof_size(const ProofRef& p) {
  std::size_t n = 1;
  for (const ProofRef& q : p->premises) n += proof_size(q);
  return n;
}

bool proof_uses(const ProofRef& p, Rule r) {
  if (p->rule == r) return true;
  for (const ProofRef& q : p->premises)
    if (proof_uses(q, r)) return true;
  return false;
}

bool proof_uses_unsafe(const ProofRef& p) { return proof_uses(p, Rule::OrE) || proof_uses(p, Rule::ExE); }

}  // namespace dya
