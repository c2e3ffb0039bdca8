#include <doctest.h>

#include "properties.hpp"

using namespace dya;
using namespace dya::testing;


TEST_CASE("dy: hand examples") {
  const TermSet X = terms({"{(m, k2)}k", "k", "{n}k2", "{0}sk(A)", "vk(A)", "{1}vk(B)"});
  CHECK(dy_derive(X, T("m")));
  CHECK(dy_derive(X, T("n")));
  CHECK(dy_derive(X, T("0")));  // vk(A) opens {.}sk(A)
  CHECK_FALSE(dy_derive(X, T("1")));
  CHECK_FALSE(dy_derive(X, T("sk(A)")));
  CHECK(dy_derive(X, T("{(n, m)}k")));
  CHECK(dy_derive(X, T("f((m, n))")));
  CHECK_FALSE(dy_derive(X, T("sk(B)")));
  CHECK(dy_derive(X, T("x")));  // variables stand for derivable terms
}

TEST_CASE("dy: proofs replay") {
  const TermSet X = terms({"{(m, k2)}k", "k", "{n}k2"});
  auto p = dy_derive(X, T("({n}k, n)"));
  REQUIRE(p);
  std::string why;
  CHECK_MESSAGE(check_dy_proof(X, *p, &why), why);
  CHECK(p->conclusion == T("({n}k, n)"));
}

TEST_CASE("dy: agrees with the brute-force oracle on 1000 random instances") {
  const DyOracleResult r = dy_oracle_suite(1000, 0xD1E5);
  CHECK(r.instances == 1000);
  CHECK(r.mismatches == 0);
  CHECK(r.bad_proofs == 0);
  // the sample is not dominated by either answer
  CHECK(r.positives > 200);
  CHECK(r.positives < 800);
}

TEST_CASE("dy: saturation is monotone and idempotent") {
  Gen g(77);
  for (int i = 0; i < 200; ++i) {
    TermSet X;
    for (int j = 0; j < 4; ++j) X.insert(g.term(3));
    const TermSet S = dy_saturate(X);
    CHECK(dy_saturate(S) == S);
    for (const Term& x : X) CHECK(S.count(x));
    TermSet Y = X;
    Y.insert(g.term(2));
    const TermSet SY = dy_saturate(Y);
    for (const Term& s : S) CHECK(SY.count(s));
  }
}
