#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dya/assertion.hpp"
#include "dya/signature.hpp"
#include "dya/term.hpp"

namespace dya {

enum class ActionKind : std::uint8_t { Send, AnonSend, Receive, Confirm, Deny, Insert };

std::string_view action_keyword(ActionKind k);

/// One protocol action. Communicating actions carry an optional term and an
/// optional assertion ("_" in the concrete syntax); fresh is only used by
/// sends and holds either variables (in roles) or the chosen values (in
/// ground actions).
struct Action {
  ActionKind kind = ActionKind::Send;
  Term agent;
  std::vector<Term> fresh;
  std::optional<Term> term;
  std::optional<Assertion> assertion;
  std::string phase;

  bool communicates() const { return kind == ActionKind::Send || kind == ActionKind::AnonSend || kind == ActionKind::Receive; }
  bool is_send() const { return kind == ActionKind::Send || kind == ActionKind::AnonSend; }
  bool ground() const;

  friend bool operator==(const Action&, const Action&);
};

/// DSL form, e.g. "send id fresh(k): {v}k, id says valid(v) @auth".
std::string to_string(const Action& a, bool with_phase = true);
Action substitute(const Action& a, const TermMap& sigma);
/// Free variables of the action (fresh variables included).
std::set<std::string> action_vars(const Action& a);

struct Role {
  std::string name;
  std::vector<std::string> params;
  std::vector<Action> actions;

  friend bool operator==(const Role&, const Role&) = default;
};

struct AgentTerms {
  Term agent;  // invalid term: every agent
  std::vector<Term> terms;
  friend bool operator==(const AgentTerms&, const AgentTerms&) = default;
};

struct AgentFact {
  Term agent;  // invalid term: every agent
  Assertion fact;
  friend bool operator==(const AgentFact&, const AgentFact&) = default;
};

struct Protocol {
  std::string name;
  Signature sig;
  std::vector<std::string> phases;
  std::vector<Term> pub;  // known to every agent, the intruder included
  std::vector<AgentTerms> know;
  std::vector<AgentFact> facts;
  std::vector<Role> roles;

  const Role* role(std::string_view name) const;
  std::vector<Term> agents() const;
  /// Position of a phase in `phases`; 0 when the protocol has none.
  int phase_index(const std::string& phase) const;

  friend bool operator==(const Protocol&, const Protocol&);
};

inline constexpr std::string_view kIntruder = "I";
inline constexpr std::string_view kPrincipal = "id";

Protocol parse_protocol(std::string_view text);
Action parse_action(std::string_view text, const Signature& sig, int line_no = 1);
std::string print_protocol(const Protocol& p);

struct Diagnostic {
  std::string code;  // unbound-variable, fresh-reuse, reveal-violation, principal, ...
  std::string role;
  int action = -1;
  std::string detail;
};
std::string to_string(const Diagnostic& d);

std::vector<Diagnostic> validate_role(const Role& r, const Protocol& p);
std::vector<Diagnostic> validate_protocol(const Protocol& p);

/// Variables of r that originate outside receives and fresh annotations.
std::set<std::string> role_free_vars(const Role& r);
/// Variables used where a key is expected ({.}k, fresh keys).
std::set<std::string> key_vars(const Role& r);
/// Variables used where an agent is expected (principal, says/sent).
std::set<std::string> agent_vars(const Role& r);

bool suitable(const TermMap& sigma, const Role& r, std::string* why = nullptr);

/// sigma applied to every action. Throws std::invalid_argument when sigma is
/// not suitable for r.
std::vector<Action> instantiate(const Role& r, const TermMap& sigma);

// Built-in models.
std::string foo_source();
std::string foo_mutant_source();
std::string helios_source(int voters = 2);
std::string leak_sequent_source();
Protocol builtin_foo();
Protocol builtin_foo_mutant();
Protocol builtin_helios(int voters = 2);

}  // namespace dya
