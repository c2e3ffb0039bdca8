#pragma once

// Scripted protocol situations used by the runtime tests and the acceptance
// binary.

#include <functional>
#include <optional>

#include "dya/runtime.hpp"

namespace dya::testing {

inline Term agent(const std::string& n) { return Term::basic(n, Sort::Agent); }

// Repeatedly takes the first enabled action accepted by `want` until none is.
inline ProtocolState drive(const Protocol& p, ProtocolState s, const std::function<bool(const Action&)>& want,
                           std::vector<Action>* taken = nullptr) {
  for (bool moved = true; moved;) {
    moved = false;
    for (const Action& a : enabled_actions(p, s)) {
      if (!want(a)) continue;
      s = step(s, a, enabled(p, s, a));
      if (taken) taken->push_back(a);
      moved = true;
      break;
    }
  }
  return s;
}

inline std::function<bool(const Action&)> by_agent(const std::string& n) {
  return [n](const Action& a) { return a.agent == agent(n); };
}

inline Action act(const Protocol& p, const std::string& text) { return parse_action(text, p.sig); }

struct ReplayOutcome {
  EnabledVerdict honest;  // the original message delivered to its own session
  EnabledVerdict replay;  // the same ballot offered in another voter's name
};

// FOO with three voters: V1 sends its blinded ballot; the intruder offers it
// to the authority as V2's.
inline ReplayOutcome foo_replay(bool corrupt_v2 = false) {
  const Protocol p = builtin_foo();
  InitialSetup setup = voting_setup(p, 3);
  if (corrupt_v2) setup.compromised.push_back(agent("V2"));
  std::vector<Action> taken;
  const ProtocolState s = drive(p, initial_state(p, setup), by_agent("V1"), &taken);
  const std::string c = to_string(*taken.at(0).term);
  ReplayOutcome o;
  o.honest = enabled(p, s, act(p, "recv A: " + c + ", V1 says [ex x, r: {x}r = " + c + " /\\ valid(x)]"));
  o.replay = enabled(p, s, act(p, "recv A: " + c + ", V2 says [ex x, r: {x}r = " + c + " /\\ valid(x)]"));
  return o;
}

// Helios with three voters, V2 corrupt: V1's prepared ballot is offered to
// the administrator as V2's.
inline ReplayOutcome helios_replay() {
  const Protocol p = builtin_helios(3);
  InitialSetup setup = voting_setup(p, 3);
  setup.compromised.push_back(agent("V2"));
  const ProtocolState s = drive(p, initial_state(p, setup), [](const Action& a) {
    return a.agent == agent("V1") || (a.agent == agent("S") && to_string(a).find("V1") != std::string::npos);
  });
  std::optional<Term> b1;
  for (const Traffic& t : s.traffic)
    if (t.term && t.term->is_app() && t.term->name() == "ballot") b1 = t.term;
  const std::string b = to_string(b1.value());
  ReplayOutcome o;
  o.honest = enabled(p, s, act(p, "recv A: " + b + ", S says [ex x: " + b + " = ballot(x) /\\ V1 says valid(x)]"));
  o.replay = enabled(p, s, act(p, "recv A: " + b + ", S says [ex x: " + b + " = ballot(x) /\\ V2 says valid(x)]"));
  return o;
}

struct DoubleVote {
  int denies_passed = 0;
  int inserts = 0;
  Reason second = Reason::Ok;  // verdict on the second authorisation's deny
};

// One voter with two voting sessions (or one ballot offered twice) and two
// authorisation sessions for the same name.
inline DoubleVote double_vote(bool helios) {
  const Protocol p = helios ? builtin_helios(2) : builtin_foo();
  InitialSetup setup;
  setup.sessions = parse_sessions(helios ? "voter(V0, v0) script(S, V0) admin(A, V0) admin(A, V0)"
                                         : "voter(V0, v0) voter(V0, v1) authority(A, V0) authority(A, V0)",
                                  p);
  setup.compromised = {agent("A")};
  std::vector<Action> taken;
  const ProtocolState s = drive(p, initial_state(p, setup), [](const Action&) { return true; }, &taken);
  DoubleVote d;
  for (const Action& a : taken) {
    d.denies_passed += a.kind == ActionKind::Deny;
    d.inserts += a.kind == ActionKind::Insert;
  }
  const Session& second = s.sessions[3].pc == 1 ? s.sessions[3] : s.sessions[2];
  d.second = second.pc == 1 ? enabled(p, s, second.head()).reason : Reason::Ok;
  return d;
}

}  // namespace dya::testing
