#include <doctest.h>

#include "dya/anonymity.hpp"
#include "support.hpp"

using namespace dya;

namespace {

Term agent(const std::string& n) { return Term::basic(n, Sort::Agent); }

struct Pair {
  Protocol p;
  Run run, swapped;
  SwapSpec spec;
  Knowledge left, right;
};

Pair make_pair(const Protocol& p, int voters, std::uint64_t seed, bool require_anonymous = true) {
  Pair out{p, {}, {}, {}, {}, {}};
  out.run = simulate(p, voting_setup(p, voters), seed);
  out.spec = find_swap_spec(p, out.run, require_anonymous);
  out.swapped = build_swapped_run(out.run, out.spec, require_anonymous);
  out.left = validate_run(p, out.run).final_state.intruder();
  out.right = validate_run(p, out.swapped).final_state.intruder();
  return out;
}

std::pair<std::vector<Assertion>, std::vector<Assertion>> instances(const std::vector<TestAssertion>& tests,
                                                                    const Run& l, const Run& r) {
  std::vector<Assertion> a, b;
  for (const TestAssertion& t : tests) {
    a.push_back(t.instance(l));
    b.push_back(t.instance(r));
  }
  return {a, b};
}

}  // namespace

TEST_CASE("swap spec locates the two voter sessions") {
  const Pair x = make_pair(builtin_foo(), 3, 5);
  const SwapSpec& s = x.spec;
  CHECK(s.V0 == agent("V0"));
  CHECK(s.V1 == agent("V1"));
  CHECK(s.i < s.k);
  CHECK(s.j < s.l);
  CHECK(x.run.actions[s.i].agent == agent("V0"));
  CHECK(x.run.actions[s.k].kind == ActionKind::AnonSend);
  CHECK(*x.run.handle(s.i) == s.d);
  CHECK(*x.run.handle(s.j) == s.e);
  CHECK(s.d == Term::enc(Term::basic("v0", Sort::Nonce), s.p));
  CHECK(s.e == Term::enc(Term::basic("v1", Sort::Nonce), s.q));
}

TEST_CASE("the swapped run is valid and exchanges the votes") {
  const Pair x = make_pair(builtin_foo(), 2, 0);
  const RunCheck rc = validate_run(x.p, x.swapped);
  REQUIRE(rc.ok);
  CHECK(x.swapped.actions.size() == x.run.actions.size());
  // voter V0 now votes v1
  const Action& first = x.swapped.actions[x.spec.i];
  CHECK(first.agent == agent("V0"));
  CHECK(to_string(*first.term).find("v1") != std::string::npos);
  // cast agents traded places
  CHECK(x.swapped.actions[x.spec.k].agent == agent("V1"));
  CHECK(x.swapped.actions[x.spec.l].agent == agent("V0"));
  CHECK(x.right.X == swp(x.left.X, x.spec));
  CHECK(x.right.phi == swp(x.left.phi, x.spec));
}

TEST_CASE("pipeline errors") {
  const Protocol foo = builtin_foo();
  const Run one = simulate(foo, voting_setup(foo, 1), 0);
  CHECK_THROWS_AS(find_swap_spec(foo, one), AnonymityError);
  const Protocol mut = builtin_foo_mutant();
  const Run mr = simulate(mut, voting_setup(mut, 2), 0);
  CHECK_THROWS_AS(find_swap_spec(mut, mr, true), AnonymityError);
  CHECK_NOTHROW(find_swap_spec(mut, mr, false));
  Run cut = simulate(foo, voting_setup(foo, 2), 0);
  cut.actions.resize(3);
  CHECK_THROWS_AS(find_swap_spec(foo, cut), AnonymityError);
}

TEST_CASE("safety of the FOO intruder state, and a leak that breaks it") {
  const Pair x = make_pair(builtin_foo(), 2, 1);
  const AssertionSet pi = witness_close(x.left.phi).pi;
  const SafetyResult ok = check_safety(x.left.X, pi, x.spec);
  CHECK_MESSAGE(ok.safe, ok.detail);
  AssertionSet leaked = pi;
  leaked.insert(Assertion::eq(x.spec.p, Term::var("w")));
  CHECK_FALSE(check_safety(x.left.X, leaked, x.spec).safe);
  AssertionSet opened = pi;
  opened.insert(Assertion::eq(x.spec.d, Term::enc(Term::basic("v0", Sort::Nonce), Term::var("w"))));
  CHECK_FALSE(check_safety(x.left.X, opened, x.spec).safe);
}

TEST_CASE("test generation is deterministic and starts with sent facts") {
  const Pair x = make_pair(builtin_foo(), 2, 0);
  const auto a = generate_tests(x.p, x.run, 3, 300, 9);
  const auto b = generate_tests(x.p, x.run, 3, 300, 9);
  REQUIRE(a.size() == 300);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].tmpl == b[i].tmpl);
    CHECK(a[i].handles == b[i].handles);
    CHECK(std::is_sorted(a[i].handles.begin(), a[i].handles.end()));
    for (std::size_t h : a[i].handles) CHECK(x.run.handle(h).has_value());
  }
  CHECK(a[0].tmpl.is(AssertionKind::SentT));
  CHECK(generate_tests(x.p, x.run, 3, 300, 10)[299].tmpl != a[299].tmpl);
}

TEST_CASE("parallel battery equals the serial reference") {
  for (const bool mutant : {false, true}) {
    const Protocol p = mutant ? builtin_foo_mutant() : builtin_foo();
    const Pair x = make_pair(p, 3, 2, !mutant);
    const auto tests = generate_tests(p, x.run, 3, 400, 2);
    const auto [lg, rg] = instances(tests, x.run, x.swapped);
    const Context L(x.left.X, x.left.phi, Mode::Full);
    const Context R(x.right.X, x.right.phi, Mode::Full);
    const Context C(x.left.X, witness_close(x.left.phi).pi, Mode::Safe);
    const auto par = run_battery(L, R, &C, lg, rg);
    const auto ser = run_battery_serial(L, R, &C, lg, rg);
    REQUIRE(par.size() == ser.size());
    std::size_t differ = 0, left_pos = 0;
    for (std::size_t i = 0; i < par.size(); ++i) {
      CHECK(par[i].left == ser[i].left);
      CHECK(par[i].right == ser[i].right);
      CHECK(par[i].result == ser[i].result);
      CHECK(par[i].closure_finding == ser[i].closure_finding);
      differ += ser[i].result == TestResult::Differ;
      left_pos += ser[i].left;
      CHECK_FALSE(ser[i].closure_finding);
    }
    CHECK(left_pos > 20);  // the battery is not vacuous
    if (mutant)
      CHECK(differ > 0);
    else
      CHECK(differ == 0);
  }
}

TEST_CASE("FOO passes every component on a few seeds") {
  AnonymityConfig cfg;
  cfg.seeds = {0, 1, 2};
  cfg.tests = 200;
  const AnonymityReport rep = check_anonymity_foo(builtin_foo(), cfg);
  for (const SeedReport& s : rep.seeds) {
    CAPTURE(s.seed);
    CHECK_MESSAGE(s.pass(), s.failure);
    CHECK(s.voters == 2 + static_cast<int>(s.seed % 3));
  }
  CHECK(rep.all_pass());
  const std::string text = format_report(rep);
  CHECK(text.find("summary seed=2 voters=4") != std::string::npos);
  CHECK(text == format_report(check_anonymity_foo(builtin_foo(), cfg)));
}

TEST_CASE("the mutant is distinguished by a sent fact at the cast") {
  AnonymityConfig cfg;
  cfg.seeds = {0, 1};
  cfg.tests = 200;
  cfg.require_anonymous = false;
  const AnonymityReport rep = check_anonymity_foo(builtin_foo_mutant(), cfg);
  for (const SeedReport& s : rep.seeds) {
    CAPTURE(s.seed);
    CHECK_FALSE(s.pass());
    REQUIRE(s.tests.distinguisher);
    const TestAssertion& d = *s.tests.distinguisher;
    CHECK(d.tmpl.is(AssertionKind::SentT));
    const Run run = parse_trace(s.trace, builtin_foo_mutant());
    const SwapSpec spec = find_swap_spec(builtin_foo_mutant(), run, false);
    REQUIRE(d.handles.size() == 1);
    CHECK((d.handles[0] == spec.k || d.handles[0] == spec.l));
  }
}
