#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dya/engine.hpp"
#include "dya/protocol.hpp"

namespace dya {

struct Knowledge {
  TermSet X;
  AssertionSet phi;
  friend bool operator==(const Knowledge&, const Knowledge&) = default;
};

struct SessionSpec {
  std::string role;
  TermMap sigma;
  friend bool operator==(const SessionSpec&, const SessionSpec&) = default;
};

struct InitialSetup {
  std::vector<SessionSpec> sessions;
  /// Agents whose initial terms are handed to the intruder.
  std::vector<Term> compromised;
  TermSet intruder_terms;
  friend bool operator==(const InitialSetup&, const InitialSetup&) = default;
};

/// "voter(V0, v0) authority(A, V0) ..." with arguments in parameter order.
std::vector<SessionSpec> parse_sessions(std::string_view text, const Protocol& p);

/// Voting setup by role-name convention: voters V0..V{n-1} with votes
/// alternating v0, v1; one authority/script/admin session per voter; the
/// authority and counter/tally agents compromised.
InitialSetup voting_setup(const Protocol& p, int voters);

struct Session {
  int id = 0;
  std::string role;
  std::vector<Action> actions;  // the role under the initial substitution
  TermMap sigma;                // accumulated bindings
  std::size_t pc = 0;
  std::size_t fresh_used = 0;
  std::set<std::string> key_vars;

  bool done() const { return pc >= actions.size(); }
  Action head() const { return substitute(actions[pc], sigma); }
};

struct Traffic {
  std::optional<Term> term;
  std::optional<Assertion> assertion;
};

struct ProtocolState {
  std::map<Term, Knowledge> agents;
  std::vector<Session> sessions;
  std::vector<Traffic> traffic;
  TermSet used;  // fresh values already taken
  std::vector<std::string> lints;

  const Knowledge& of(const Term& agent) const;
  Knowledge& of(const Term& agent);
  const Knowledge& intruder() const { return of(Term::basic(std::string(kIntruder), Sort::Agent)); }
};

ProtocolState initial_state(const Protocol& p, const InitialSetup& setup);

enum class Reason : std::uint8_t {
  Ok,
  NoMatchingSession,
  NotGround,
  FreshReused,
  TermUnderivable,
  AssertionUnderivable,
  DenyDerivable,
  DenyInconclusive,
};
std::string_view reason_name(Reason r);

struct EnabledVerdict {
  Reason reason = Reason::NoMatchingSession;
  int session = -1;
  TermMap sigma;
  std::string warning;
  explicit operator bool() const { return reason == Reason::Ok; }
};

EnabledVerdict enabled(const Protocol& p, const ProtocolState& s, const Action& b, const SearchBudget& budget = {});
/// Applies b, which must have been found enabled with verdict v.
ProtocolState step(const ProtocolState& s, const Action& b, const EnabledVerdict& v);

enum class RecipePolicy { Forward, Synth };
struct Recipes {
  RecipePolicy policy = RecipePolicy::Forward;
  int depth = 2;
};

/// Enabled ground actions, deduplicated, in session order. For protocols
/// with phases only the earliest phase that has an enabled action is offered.
std::vector<Action> enabled_actions(const Protocol& p, const ProtocolState& s, const Recipes& recipes = {},
                                    const SearchBudget& budget = {});

struct Run {
  std::string protocol;
  std::uint64_t seed = 0;
  InitialSetup setup;
  std::vector<Action> actions;

  /// Term communicated by action i, if any.
  std::optional<Term> handle(std::size_t i) const;
  friend bool operator==(const Run&, const Run&) = default;
};

Run simulate(const Protocol& p, const InitialSetup& setup, std::uint64_t seed, const Recipes& recipes = {},
             std::size_t max_steps = 1000, const SearchBudget& budget = {});

struct RunCheck {
  bool ok = false;
  std::size_t failed_at = 0;
  Reason reason = Reason::Ok;
  std::string detail;
  ProtocolState final_state;
  std::vector<int> session_of;  // per step
  std::vector<std::string> warnings;
};

RunCheck validate_run(const Protocol& p, const Run& run, const SearchBudget& budget = {});

std::string write_trace(const Run& run);
Run parse_trace(std::string_view text, const Protocol& p);
std::string dump_knowledge(const Knowledge& k);

}  // namespace dya
