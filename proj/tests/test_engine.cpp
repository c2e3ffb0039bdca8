#include <doctest.h>

#include "dya/protocol.hpp"
#include "dya/sequent_file.hpp"
#include "support.hpp"

using namespace dya;
using namespace dya::testing;

TEST_CASE("leak: two certificates reveal the vote") {
  const SequentFile f = parse_sequent_file(leak_sequent_source());
  const Sequent& s = f.sequent;
  const Verdict full = checked_derive(s.X, s.Phi, s.goal);
  REQUIRE(full.derivable);
  std::string why;
  CHECK_MESSAGE(check_proof(s.X, s.Phi, full.proof, s.goal, &why), why);
  CHECK(proof_uses(full.proof, Rule::ExE));
  CHECK(proof_uses(full.proof, Rule::OrE));
  CHECK(proof_uses(full.proof, Rule::EncProj));
  CHECK(proof_uses(full.proof, Rule::Trans));
  CHECK(proof_uses(full.proof, Rule::ExI));

  const Verdict safe = derive(s.X, s.Phi, s.goal, Mode::Safe);
  CHECK_FALSE(safe.derivable);
  CHECK_FALSE(safe.exhausted);

  // Either certificate alone hides the vote.
  for (const Assertion& one : s.Phi) {
    const Verdict v = derive(s.X, AssertionSet{one}, s.goal);
    CHECK_FALSE(v.derivable);
    CHECK_FALSE(v.exhausted);
  }
}

TEST_CASE("sequent file round trip") {
  const SequentFile f = parse_sequent_file(leak_sequent_source());
  const SequentFile g = parse_sequent_file(print_sequent_file(f));
  CHECK(g.sequent.X == f.sequent.X);
  CHECK(g.sequent.Phi == f.sequent.Phi);
  CHECK(g.sequent.goal == f.sequent.goal);
}

TEST_CASE("equality rules") {
  const TermSet X = terms({"m", "n", "k"});
  CHECK(checked_derive(X, {}, As("m = m")).derivable);
  CHECK_FALSE(derive(X, {}, As("m = n")).derivable);
  // refl needs the atoms
  CHECK_FALSE(derive(X, {}, As("k2 = k2")).derivable);
  CHECK(checked_derive(X, assertions({"m = n"}), As("{n}k = {m}k")).derivable);
  CHECK(checked_derive(X, assertions({"(m, n) = (n, m)"}), As("m = n")).derivable);
  CHECK(checked_derive(X, assertions({"m = n", "n = 0"}), As("0 = m")).derivable);
  // enc projection needs the inverse keys
  CHECK(checked_derive(X, assertions({"{m}k = {n}k"}), As("m = n")).derivable);
  CHECK_FALSE(derive(X, assertions({"{m}k2 = {n}k2"}), As("m = n")).derivable);
  // subst moves predicates along equalities
  CHECK(checked_derive(X, assertions({"p(m)", "m = n"}), As("p(n)")).derivable);
}

TEST_CASE("says needs the signing key; strip is local") {
  const TermSet X = terms({"m", "sk(A)"});
  CHECK(checked_derive(X, assertions({"p(m)"}), As("A says p(m)")).derivable);
  CHECK_FALSE(derive(X, assertions({"p(m)"}), As("B says p(m)")).derivable);
  CHECK(checked_derive(X, assertions({"B says p(m)"}), As("B says p(m)")).derivable);
  CHECK(checked_derive(X, assertions({"B says p(m)"}), As("p(m)")).derivable);
  CHECK(checked_derive(X, assertions({"B says p(m)"}), As("A says p(m)")).derivable);
  CHECK(checked_derive(X, assertions({"B says [p(m) /\\ q(m, m)]"}), As("q(m, m)")).derivable);
}

TEST_CASE("disjunction and existentials") {
  const TermSet X = terms({"m", "n"});
  CHECK(checked_derive(X, assertions({"p(m)"}), As("p(m) \\/ p(n)")).derivable);
  CHECK(checked_derive(X, assertions({"p(m)"}), As("ex z: p(z)")).derivable);
  CHECK(checked_derive(X, assertions({"p(m) \\/ q(m, n)", "p(m) \\/ p(n)"}), As("p(m) \\/ [q(m, n) /\\ p(n)]"))
            .derivable);
  CHECK(checked_derive(X, assertions({"ex z: p(z) /\\ q(z, m)"}), As("ex z: q(z, m)")).derivable);
  CHECK(derive(X, assertions({"ex z: p(z) /\\ q(z, m)"}), As("ex z: q(z, m)"), Mode::Safe).derivable == false);
  CHECK_FALSE(derive(X, assertions({"ex z: p(z)"}), As("p(m)")).derivable);
  CHECK_FALSE(derive(X, assertions({"p(m) \\/ p(n)"}), As("p(m)")).derivable);
}

TEST_CASE("contradictions explode") {
  const TermSet X = terms({"m", "n"});
  const Assertion anything = As("q(n, m) /\\ A says p(0)");
  CHECK(checked_derive(X, assertions({"m = n"}), anything).derivable);
  CHECK(checked_derive(X, assertions({"(m, 0) = (n, 0)"}), anything).derivable);
  CHECK(checked_derive(X, assertions({"ex z: z = m /\\ z = n"}), anything).derivable);
  // only distinct basic names clash; a pair equated with a ciphertext is no contradiction
  CHECK_FALSE(derive(X, assertions({"{m}k = (m, n)"}), anything).derivable);
  CHECK(checked_derive(X, assertions({"m = n \\/ m = 0", "m = 0 \\/ n = 0"}), As("n = 0 \\/ m = n")).derivable);
}

TEST_CASE("checker rejects forged proofs") {
  const TermSet X = terms({"m"});
  const AssertionSet phi = assertions({"p(m)"});
  CHECK(check_proof(X, phi, make_proof(Rule::Ax, As("p(m)")), As("p(m)")));
  CHECK_FALSE(check_proof(X, phi, make_proof(Rule::Ax, As("p(n)")), As("p(n)")));
  CHECK_FALSE(check_proof(X, phi, make_proof(Rule::Ax, As("p(m)")), As("p(n)")));
  auto fake_says = make_proof(Rule::Says, As("A says p(m)"), {make_proof(Rule::Ax, As("p(m)"))});
  CHECK_FALSE(check_proof(X, phi, fake_says, As("A says p(m)")));
  auto bad_sym = make_proof(Rule::Sym, As("m = n"), {make_proof(Rule::Ax, As("p(m)"))});
  CHECK_FALSE(check_proof(X, phi, bad_sym));
}

TEST_CASE("branch cap makes the verdict inconclusive, never wrong") {
  AssertionSet phi;
  for (int i = 0; i < 14; ++i) {
    phi.insert(Assertion::disj(Assertion::pred("q", {Term::basic("m", Sort::Nonce), Term::var("c" + std::to_string(i))}),
                               Assertion::pred("q", {Term::basic("n", Sort::Nonce), Term::var("c" + std::to_string(i))})));
  }
  SearchBudget small;
  small.branch_cap = 64;
  const Verdict v = derive(terms({"m", "n"}), phi, As("p(0)"), Mode::Full, small);
  CHECK_FALSE(v.derivable);
  CHECK(v.exhausted);
  CHECK_FALSE(v.note.empty());
}

TEST_CASE("context reuse matches one-shot derive") {
  const SequentFile f = parse_sequent_file(leak_sequent_source());
  const Context ctx(f.sequent.X, f.sequent.Phi, Mode::Full);
  const std::vector<Assertion> goals = {f.sequent.goal, As("ex y: {v}k = {2}y"), As("ex y: {v}k = {1}y"),
                                        As("v = v")};
  for (const Assertion& g : goals) {
    const Verdict a = ctx.prove(g);
    const Verdict b = derive(f.sequent.X, f.sequent.Phi, g, Mode::Full);
    CHECK(a.derivable == b.derivable);
    if (a.derivable) CHECK(check_proof(f.sequent.X, f.sequent.Phi, a.proof, g));
  }
}

TEST_CASE("witness closure and congruence classes") {
  const WitnessClosure w = witness_close(assertions({"ex x: p(x) /\\ x = m"}));
  CHECK(w.ledger.size() == 1);
  bool has_instance = false;
  for (const Assertion& a : w.pi) has_instance |= a.is(AssertionKind::Pred) && a.terms()[0].is_var();
  CHECK(has_instance);

  const Classes c = congruence_close(terms({"m"}), assertions({"x = y", "{y}k = {z}k"}));
  CHECK(c.same(T("x"), T("y")));
  CHECK(c.same(T("{y}k"), T("{z}k")));
  CHECK_FALSE(c.same(T("x"), T("m")));
  CHECK_FALSE(check_bottom(c));
  CHECK(check_bottom(congruence_close(terms({"m"}), assertions({"x = m", "x = n"}))));
}
