#include "dya/checker.hpp"

#include <functional>

namespace dya {

using AK = AssertionKind;

namespace {

bool rigid(const Term& t) {
  std::set<std::string> vs;
  collect_vars(t, vs);
  for (const auto& v : vs)
    if (is_bound_name(v)) return true;
  return false;
}

bool ground_atom(const Term& t) { return t.is_basic() || (t.is_key_app() && t.is_ground()); }

struct Checker {
  const TermSet& X;
  std::string err;

  bool fail(const ProofNode& n, const std::string& msg) {
    if (err.empty()) err = std::string(rule_name(n.rule)) + ": " + msg + "  [" + to_string(n.conclusion) + "]";
    return false;
  }

  bool dy_ok(const ProofNode& n, std::size_t i, const Term& expect) {
    if (n.dy.size() <= i) return fail(n, "missing Dolev-Yao side proof");
    if (!(n.dy[i].conclusion == expect)) return fail(n, "side proof derives " + to_string(n.dy[i].conclusion));
    std::string why;
    if (!check_dy_proof(X, n.dy[i], &why)) return fail(n, "side proof invalid: " + why);
    return true;
  }

  // t' is t with some positions holding `from` replaced by `to`
  static bool rewrites(const Term& a, const Term& b, const Term& from, const Term& to) {
    if (a == b) return true;
    if (a == from && b == to) return true;
    if (a.kind() != b.kind() || a.args().size() != b.args().size() || a.is_atom()) return false;
    if (a.is_app() && a.name() != b.name()) return false;
    for (std::size_t i = 0; i < a.args().size(); ++i)
      if (!rewrites(a.args()[i], b.args()[i], from, to)) return false;
    return true;
  }

  static bool rewrites(const Assertion& a, const Assertion& b, const Term& from, const Term& to) {
    if (a.kind() != b.kind() || a.name() != b.name() || a.terms().size() != b.terms().size() ||
        a.subs().size() != b.subs().size())
      return false;
    const bool agent = a.is(AK::Says) || a.is(AK::SentT) || a.is(AK::SentA);
    for (std::size_t i = 0; i < a.terms().size(); ++i) {
      if (agent && i == 0) {
        if (!(a.terms()[0] == b.terms()[0])) return false;
      } else if (!rewrites(a.terms()[i], b.terms()[i], from, to)) {
        return false;
      }
    }
    for (std::size_t i = 0; i < a.subs().size(); ++i)
      if (!rewrites(a.subs()[i], b.subs()[i], from, to)) return false;
    return true;
  }

  bool premises(const ProofNode& n, std::size_t k) {
    if (n.premises.size() != k) return fail(n, "expected " + std::to_string(k) + " premises");
    for (const auto& p : n.premises)
      if (!p) return fail(n, "null premise");
    return true;
  }

  bool is_eq(const ProofNode& n, const ProofRef& p) {
    if (!p->conclusion.is(AK::Eq)) return fail(n, "premise is not an equation");
    return true;
  }

  bool congruence(const ProofNode& n) {
    const Assertion& c = n.conclusion;
    if (!c.is(AK::Eq)) return fail(n, "conclusion is not an equation");
    const Term& s = c.lhs();
    const Term& t = c.rhs();
    const bool shape = n.rule == Rule::PairCong  ? s.is_pair() && t.is_pair()
                       : n.rule == Rule::EncCong ? s.is_enc() && t.is_enc()
                                                 : s.is_app() && t.is_app() && !s.is_key_app() &&
                                                       s.name() == t.name() && s.args().size() == t.args().size();
    if (!shape) return fail(n, "terms do not have the rule's shape");
    if (!premises(n, s.args().size())) return false;
    for (std::size_t i = 0; i < s.args().size(); ++i) {
      const Assertion& pc = n.premises[i]->conclusion;
      if (!(pc == Assertion::eq(s.args()[i], t.args()[i]))) return fail(n, "premise does not match component");
    }
    return true;
  }

  bool check(const ProofRef& p, const AssertionSet& hyps) {
    if (!p) {
      if (err.empty()) err = "null proof";
      return false;
    }
    const ProofNode& n = *p;
    const Assertion& c = n.conclusion;
    if (!c.valid()) return fail(n, "empty conclusion");
    if (!local(n, hyps)) return false;
    // premises of or-e / ex-e cases are checked under extended hypotheses by local()
    if (n.rule == Rule::OrE || n.rule == Rule::ExE) return true;
    for (const auto& q : n.premises)
      if (!check(q, hyps)) return false;
    return true;
  }

  bool local(const ProofNode& n, const AssertionSet& hyps) {
    const Assertion& c = n.conclusion;
    switch (n.rule) {
      case Rule::Ax:
        if (!hyps.count(c)) return fail(n, "not a hypothesis");
        return premises(n, 0);
      case Rule::Refl:
        if (!c.is(AK::Eq) || !(c.lhs() == c.rhs())) return fail(n, "not of the form t = t");
        return premises(n, 0) && dy_ok(n, 0, c.lhs());
      case Rule::Subst: {
        if (!premises(n, 2) || !is_eq(n, n.premises[1])) return false;
        const Assertion& e = n.premises[1]->conclusion;
        if (rigid(e.lhs()) || rigid(e.rhs())) return fail(n, "rewrite mentions a bound variable");
        if (!rewrites(n.premises[0]->conclusion, c, e.lhs(), e.rhs())) return fail(n, "not a rewrite of the premise");
        return true;
      }
      case Rule::Sym:
        if (!premises(n, 1) || !is_eq(n, n.premises[0])) return false;
        if (!(c == Assertion::eq(n.premises[0]->conclusion.rhs(), n.premises[0]->conclusion.lhs())))
          return fail(n, "not the symmetric equation");
        return true;
      case Rule::Trans: {
        if (!premises(n, 2) || !is_eq(n, n.premises[0]) || !is_eq(n, n.premises[1])) return false;
        const Assertion& a = n.premises[0]->conclusion;
        const Assertion& b = n.premises[1]->conclusion;
        if (!(a.rhs() == b.lhs())) return fail(n, "middle terms differ");
        if (!(c == Assertion::eq(a.lhs(), b.rhs()))) return fail(n, "wrong conclusion");
        return true;
      }
      case Rule::PairProj: {
        if (!premises(n, 1) || !is_eq(n, n.premises[0])) return false;
        const Assertion& a = n.premises[0]->conclusion;
        if (!a.lhs().is_pair() || !a.rhs().is_pair()) return fail(n, "premise is not an equation of pairs");
        if (n.index < 0 || n.index > 1) return fail(n, "bad component");
        if (!(c == Assertion::eq(a.lhs().args()[n.index], a.rhs().args()[n.index]))) return fail(n, "wrong component");
        return true;
      }
      case Rule::EncProj: {
        if (!premises(n, 1) || !is_eq(n, n.premises[0])) return false;
        const Assertion& a = n.premises[0]->conclusion;
        if (!a.lhs().is_enc() || !a.rhs().is_enc()) return fail(n, "premise is not an equation of ciphertexts");
        if (n.index < 0 || n.index > 1) return fail(n, "bad component");
        auto i1 = inverse(a.lhs().key());
        auto i2 = inverse(a.rhs().key());
        if (!i1 || !i2) return fail(n, "key without inverse");
        if (!dy_ok(n, 0, *i1) || !dy_ok(n, 1, *i2)) return false;
        if (!(c == Assertion::eq(a.lhs().args()[n.index], a.rhs().args()[n.index]))) return fail(n, "wrong component");
        return true;
      }
      case Rule::PairCong:
      case Rule::EncCong:
      case Rule::AppCong:
        return congruence(n);
      case Rule::Bot: {
        if (!premises(n, 1) || !is_eq(n, n.premises[0])) return false;
        const Assertion& a = n.premises[0]->conclusion;
        if (!ground_atom(a.lhs()) || !ground_atom(a.rhs()) || a.lhs() == a.rhs())
          return fail(n, "premise does not equate two distinct atoms");
        return true;
      }
      case Rule::Says:
        if (!c.is(AK::Says)) return fail(n, "conclusion is not a says");
        if (!premises(n, 1)) return false;
        if (!(n.premises[0]->conclusion == c.body())) return fail(n, "premise is not the body");
        return dy_ok(n, 0, Term::sk(c.agent()));
      case Rule::AndI:
        if (!c.is(AK::And)) return fail(n, "conclusion is not a conjunction");
        if (!premises(n, 2)) return false;
        if (!(n.premises[0]->conclusion == c.left()) || !(n.premises[1]->conclusion == c.right()))
          return fail(n, "premises are not the conjuncts");
        return true;
      case Rule::AndE: {
        if (!premises(n, 1)) return false;
        const Assertion& a = n.premises[0]->conclusion;
        if (!a.is(AK::And) || n.index < 0 || n.index > 1 || !(a.subs()[n.index] == c))
          return fail(n, "not a conjunct of the premise");
        return true;
      }
      case Rule::Strip: {
        if (!premises(n, 1)) return false;
        const Assertion& a = n.premises[0]->conclusion;
        if (!a.is(AK::Says) || !(a.body() == c)) return fail(n, "premise is not a says of the conclusion");
        return true;
      }
      case Rule::OrI:
        if (!c.is(AK::Or) || n.index < 0 || n.index > 1) return fail(n, "conclusion is not a disjunction");
        if (!premises(n, 1)) return false;
        if (!(n.premises[0]->conclusion == c.subs()[n.index])) return fail(n, "premise is not the disjunct");
        return true;
      case Rule::OrE: {
        if (!premises(n, 3)) return false;
        const Assertion& d = n.premises[0]->conclusion;
        if (!d.is(AK::Or)) return fail(n, "first premise is not a disjunction");
        if (!(n.premises[1]->conclusion == c) || !(n.premises[2]->conclusion == c))
          return fail(n, "cases do not conclude the goal");
        if (!check(n.premises[0], hyps)) return false;
        for (int i = 0; i < 2; ++i) {
          AssertionSet h = hyps;
          h.insert(d.subs()[i]);
          if (!check(n.premises[i + 1], h)) return false;
        }
        return true;
      }
      case Rule::ExI: {
        if (!c.is(AK::Exists)) return fail(n, "conclusion is not an existential");
        if (!premises(n, 1)) return false;
        if (!n.term.valid() || rigid(n.term)) return fail(n, "bad witness");
        if (!(n.premises[0]->conclusion == instantiate(c, n.term))) return fail(n, "premise is not the instance");
        return true;
      }
      case Rule::ExE: {
        if (!premises(n, 2)) return false;
        const Assertion& e = n.premises[0]->conclusion;
        if (!e.is(AK::Exists)) return fail(n, "first premise is not an existential");
        if (!n.term.valid() || !n.term.is_var() || is_bound_name(n.term.name())) return fail(n, "bad eigenvariable");
        const std::string& y = n.term.name();
        std::set<std::string> used;
        for (const Term& x : X) collect_vars(x, used);
        for (const Assertion& h : hyps) collect_all_vars(h, used);
        collect_all_vars(c, used);
        collect_all_vars(e, used);
        if (used.count(y)) return fail(n, "eigenvariable " + y + " is not fresh");
        if (!(n.premises[1]->conclusion == c)) return fail(n, "body does not conclude the goal");
        if (!check(n.premises[0], hyps)) return false;
        AssertionSet h = hyps;
        h.insert(instantiate(e, n.term));
        return check(n.premises[1], h);
      }
    }
    return fail(n, "unknown rule");
  }
};

}  // namespace

bool check_proof(const TermSet& X, const AssertionSet& phi, const ProofRef& proof, std::string* why) {
  Checker c{X, {}};
  const bool ok = c.check(proof, phi);
  if (!ok && why) *why = c.err;
  return ok;
}

bool check_proof(const TermSet& X, const AssertionSet& phi, const ProofRef& proof, const Assertion& goal,
                 std::string* why) {
  if (!proof || !(proof->conclusion == goal)) {
    if (why) *why = "proof does not conclude the goal";
    return false;
  }
  return check_proof(X, phi, proof, why);
}

}  // namespace dya
