#include <doctest.h>

#include "support.hpp"

using namespace dya;
using namespace dya::testing;

TEST_CASE("term construction and printing") {
  const Term t = T("({m}k, sk(A))");
  CHECK(t.is_pair());
  CHECK(t.left().is_enc());
  CHECK(t.left().key() == Term::basic("k", Sort::Key));
  CHECK(t.right().is_key_app());
  CHECK(t.is_ground());
  CHECK(to_string(t) == "({m}k,sk(A))");
  CHECK(T(to_string(t)) == t);
  CHECK(T("x").is_var());
  CHECK_FALSE(T("{m}x").is_ground());
}

TEST_CASE("pairs nest to the right") { CHECK(T("(m, n, k)") == T("(m, (n, k))")); }

TEST_CASE("inverse keys") {
  CHECK(inverse(T("k")) == T("k"));
  CHECK(inverse(T("sk(A)")) == T("vk(A)"));
  CHECK(inverse(T("vk(A)")) == T("sk(A)"));
  CHECK_FALSE(inverse(T("m")).has_value());
  CHECK_FALSE(inverse(T("(k, k)")).has_value());
}

TEST_CASE("subterms") {
  const TermSet st = subterms(T("{(m, n)}k"));
  CHECK(st == terms({"{(m, n)}k", "(m, n)", "m", "n", "k"}));
}

TEST_CASE("substitution and replacement") {
  const Term t = T("{(x, y)}k");
  const Term s = substitute(t, [](const std::string& v) -> std::optional<Term> {
    if (v == "x") return T("m");
    return std::nullopt;
  });
  CHECK(s == T("{(m, y)}k"));
  const Term r = replace_terms(T("({m}k, {m}k2)"), [](const Term& u) -> std::optional<Term> {
    if (u == T("{m}k")) return T("{n}k");
    return std::nullopt;
  });
  CHECK(r == T("({n}k, {m}k2)"));
}

TEST_CASE("assertion parsing goldens") {
  CHECK(to_string(As("ex x, y: {v}k = {x}y /\\ (x = 0 \\/ x = 1)")) == "ex x,y: {v}k = {x}y /\\ [x = 0 \\/ x = 1]");
  CHECK(to_string(As("A says [p(m) /\\ B says q(m, n)]")) == "A says [p(m) /\\ B says q(m, n)]");
  CHECK(to_string(As("A sent {m}k")) == "A sent {m}k");
}

TEST_CASE("binders are canonical") {
  CHECK(As("ex x: p(x)") == As("ex y: p(y)"));
  CHECK(As("ex x, y: q(x, y)") != As("ex x, y: q(y, x)"));
  CHECK(free_vars(As("ex x: q(x, y)")) == std::set<std::string>{"y"});
}

TEST_CASE("substitution under a binder does not capture") {
  const Assertion a = As("ex x: q(x, y)");
  const Assertion b = substitute(a, TermMap{{"y", Term::var("x")}});
  CHECK(free_vars(b) == std::set<std::string>{"x"});
  CHECK(instantiate(As("ex x: p(x)"), T("m")) == As("p(m)"));
}

TEST_CASE("parse errors carry a position") {
  CHECK_THROWS_AS(parse_term("{m k"), ParseError);
  CHECK_THROWS_AS(parse_assertion("p(m) /\\"), ParseError);
  CHECK_THROWS_AS(parse_assertion("p(m, n)", small_sig()), ParseError);  // arity
}
