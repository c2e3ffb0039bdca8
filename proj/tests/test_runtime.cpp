#include <doctest.h>

#include "dya/runtime.hpp"
#include "scenarios.hpp"
#include "support.hpp"

using namespace dya;
using namespace dya::testing;

namespace {
Term nonce(const std::string& n) { return Term::basic(n, Sort::Nonce); }
}  // namespace

TEST_CASE("initial knowledge") {
  const Protocol p = builtin_foo();
  const InitialSetup setup = voting_setup(p, 3);
  CHECK(setup.compromised == std::vector<Term>{agent("A"), agent("C")});
  CHECK(setup.sessions.size() == 3 + 3 + 3);
  const ProtocolState s = initial_state(p, setup);
  const Knowledge& V0 = s.of(agent("V0"));
  CHECK(V0.X.count(Term::sk(agent("V0"))));
  CHECK_FALSE(V0.X.count(Term::sk(agent("V1"))));
  CHECK(V0.X.count(Term::vk(agent("V1"))));
  CHECK(V0.phi.count(parse_assertion("valid(v0)", p.sig)));
  CHECK_FALSE(V0.phi.count(parse_assertion("elg(V0)", p.sig)));
  CHECK(s.of(agent("A")).phi.count(parse_assertion("elg(V0)", p.sig)));
  const Knowledge& I = s.intruder();
  CHECK(I.X.count(Term::sk(agent("A"))));
  CHECK(I.X.count(Term::sk(agent("C"))));
  CHECK_FALSE(I.X.count(Term::sk(agent("V0"))));
}

TEST_CASE("sessions text") {
  const Protocol p = builtin_foo();
  const auto ss = parse_sessions("voter(V0, v0) authority(A, V0) counter(C)", p);
  REQUIRE(ss.size() == 3);
  CHECK(ss[0].sigma.at("v") == nonce("v0"));
  CHECK(ss[1].sigma.at("V") == agent("V0"));
  CHECK_THROWS(parse_sessions("voter(V0)", p));
  CHECK_THROWS(parse_sessions("ghost(V0)", p));
  CHECK_THROWS(parse_sessions("voter(v0, V0)", p));  // unsuitable
}

TEST_CASE("a voter's first send leaves a sent fact; the anonymous cast does not") {
  const Protocol p = builtin_foo();
  const Run run = simulate(p, voting_setup(p, 2), 4);
  const RunCheck rc = validate_run(p, run);
  REQUIRE(rc.ok);
  for (const Session& s : rc.final_state.sessions) CHECK(s.done());
  const Knowledge& I = rc.final_state.intruder();
  std::size_t sent_by_voters = 0;
  for (const Assertion& a : I.phi)
    if ((a.is(AssertionKind::SentT) || a.is(AssertionKind::SentA)) &&
        (a.agent() == agent("V0") || a.agent() == agent("V1")))
      ++sent_by_voters;
  CHECK(sent_by_voters == 4);  // term and assertion of one send each
  bool cast_seen = false;
  for (const Action& a : run.actions)
    if (a.kind == ActionKind::AnonSend) {
      cast_seen = true;
      CHECK_FALSE(I.phi.count(Assertion::sent_term(a.agent, *a.term)));
      CHECK(I.X.count(*a.term));
    }
  CHECK(cast_seen);
}

TEST_CASE("FOO: a replayed ballot is blocked by the certificate") {
  const ReplayOutcome o = foo_replay();
  // V1's message delivered verbatim is fine: it matches V1's authority session
  CHECK(o.honest);
  CHECK(o.honest.session == 4);  // authority(A, V1)
  // in V2's name it needs V2's signature
  CHECK(o.replay.reason == Reason::AssertionUnderivable);
  CHECK(reason_name(o.replay.reason) == "assertion-underivable");
  // the verdict hinges on the key alone: with V2 corrupt the forgery goes through
  CHECK(foo_replay(true).replay);
}

TEST_CASE("Helios: a replayed ballot is blocked even for a corrupt voter") {
  CHECK(voting_setup(builtin_helios(3), 3).compromised == std::vector<Term>{agent("A")});
  const ReplayOutcome o = helios_replay();
  CHECK(o.honest);
  CHECK(o.replay.reason == Reason::AssertionUnderivable);
}

TEST_CASE("a second vote is refused at the authority's deny") {
  for (const bool helios : {false, true}) {
    CAPTURE(helios);
    const DoubleVote d = double_vote(helios);
    CHECK(d.denies_passed == 1);
    CHECK(d.inserts == 1);
    CHECK(d.second == Reason::DenyDerivable);
  }
}

TEST_CASE("mutation: insert before deny blocks every vote") {
  Protocol p = builtin_foo();
  Role& auth = p.roles[1];
  REQUIRE(auth.name == "authority");
  std::swap(auth.actions[1], auth.actions[2]);
  const ProtocolState s =
      drive(p, initial_state(p, voting_setup(p, 2)), [](const Action& a) { return a.kind != ActionKind::Deny; });
  bool stuck = false;
  for (const Session& sess : s.sessions)
    if (sess.role == "authority" && !sess.done() && sess.head().kind == ActionKind::Deny) {
      stuck = true;
      CHECK(enabled(p, s, sess.head()).reason == Reason::DenyDerivable);
    }
  CHECK(stuck);
}

TEST_CASE("underivable terms and reused fresh values") {
  const Protocol p = builtin_foo();
  ProtocolState s = initial_state(p, voting_setup(p, 2));
  const Action forged = act(p, "recv A: {v0}k#9#9, V0 says [ex x, r: {x}r = {v0}k#9#9 /\\ valid(x)]");
  CHECK(enabled(p, s, forged).reason == Reason::TermUnderivable);
  const Action first =
      act(p, "send V0 fresh(k#0#0): {v0}k#0#0, V0 says [ex x, r: {x}r = {v0}k#0#0 /\\ valid(x)]");
  const EnabledVerdict v = enabled(p, s, first);
  REQUIRE(v);
  s = step(s, first, v);
  const Action again =
      act(p, "send V1 fresh(k#0#0): {v1}k#0#0, V1 says [ex x, r: {x}r = {v1}k#0#0 /\\ valid(x)]");
  CHECK(enabled(p, s, again).reason == Reason::FreshReused);
  const Action wrong_vote =
      act(p, "send V1 fresh(k#1#0): {v0}k#1#0, V1 says [ex x, r: {x}r = {v0}k#1#0 /\\ valid(x)]");
  CHECK(enabled(p, s, wrong_vote).reason == Reason::NoMatchingSession);
}

TEST_CASE("insert of a contradiction is linted") {
  Protocol p = parse_protocol(
      "protocol lint\nagents A\nnonces m, n\nrole r(id):\n  insert id: m = n\n  confirm id: m = m\n");
  InitialSetup setup;
  setup.sessions = parse_sessions("r(A)", p);
  ProtocolState s = initial_state(p, setup);
  const Action ins = s.sessions[0].head();
  s = step(s, ins, enabled(p, s, ins));
  CHECK(s.lints.size() == 1);
}

TEST_CASE("Helios run reaches the tally") {
  const Protocol p = builtin_helios(2);
  const Run run = simulate(p, voting_setup(p, 2), 1);
  const RunCheck rc = validate_run(p, run);
  REQUIRE(rc.ok);
  CHECK(run.actions.back().agent == agent("A"));
  CHECK(to_string(*run.actions.back().term) == "ballot(sum(v0,v1))");
}

TEST_CASE("validate_run rejects a doctored trace") {
  const Protocol p = builtin_foo();
  Run run = simulate(p, voting_setup(p, 2), 2);
  REQUIRE(validate_run(p, run).ok);
  std::swap(run.actions[0], run.actions.back());
  const RunCheck rc = validate_run(p, run);
  CHECK_FALSE(rc.ok);
  CHECK(rc.failed_at == 0);
}
