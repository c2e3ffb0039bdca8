#include "dya/protocol.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "dya/parse.hpp"
#include "dya/sequent_file.hpp"
#include "text_util.hpp"

namespace dya {

using detail::join;
using detail::starts_with_word;
using detail::strip_comment;
using detail::trim;

std::string_view action_keyword(ActionKind k) {
  switch (k) {
    case ActionKind::Send: return "send";
    case ActionKind::AnonSend: return "send*";
    case ActionKind::Receive: return "recv";
    case ActionKind::Confirm: return "confirm";
    case ActionKind::Deny: return "deny";
    case ActionKind::Insert: return "insert";
  }
  return "?";
}

bool Action::ground() const {
  if (!agent.is_ground()) return false;
  for (const Term& f : fresh)
    if (!f.is_ground()) return false;
  if (term && !term->is_ground()) return false;
  if (assertion && !assertion->is_ground()) return false;
  return true;
}

bool operator==(const Action& a, const Action& b) {
  return a.kind == b.kind && a.agent == b.agent && a.fresh == b.fresh && a.term == b.term &&
         a.assertion == b.assertion && a.phase == b.phase;
}

std::string to_string(const Action& a, bool with_phase) {
  std::string s(action_keyword(a.kind));
  s += ' ' + to_string(a.agent);
  if (!a.fresh.empty()) s += " fresh(" + join(a.fresh, [](const Term& t) { return to_string(t); }) + ")";
  s += ": ";
  if (a.communicates()) {
    s += a.term ? to_string(*a.term) : "_";
    s += ", ";
  }
  s += a.assertion ? to_string(*a.assertion) : "_";
  if (with_phase && !a.phase.empty()) s += " @" + a.phase;
  return s;
}

Action substitute(const Action& a, const TermMap& sigma) {
  auto image = [&](const std::string& v) -> std::optional<Term> {
    auto it = sigma.find(v);
    if (it == sigma.end()) return std::nullopt;
    return it->second;
  };
  Action b = a;
  b.agent = substitute(a.agent, image);
  for (Term& f : b.fresh) f = substitute(f, image);
  if (b.term) b.term = substitute(*a.term, image);
  if (b.assertion) b.assertion = substitute(*a.assertion, sigma);
  return b;
}

std::set<std::string> action_vars(const Action& a) {
  std::set<std::string> out;
  collect_vars(a.agent, out);
  for (const Term& f : a.fresh) collect_vars(f, out);
  if (a.term) collect_vars(*a.term, out);
  if (a.assertion) collect_free_vars(*a.assertion, out);
  return out;
}

const Role* Protocol::role(std::string_view n) const {
  for (const Role& r : roles)
    if (r.name == n) return &r;
  return nullptr;
}

std::vector<Term> Protocol::agents() const {
  std::vector<Term> out;
  for (const auto& [n, s] : sig.constants)
    if (s == Sort::Agent) out.push_back(Term::basic(n, s));
  return out;
}

int Protocol::phase_index(const std::string& phase) const {
  auto it = std::find(phases.begin(), phases.end(), phase);
  return it == phases.end() ? 0 : static_cast<int>(it - phases.begin());
}

bool operator==(const Protocol& a, const Protocol& b) {
  return a.name == b.name && a.sig.constants == b.sig.constants && a.sig.predicates == b.sig.predicates &&
         a.sig.constructors == b.sig.constructors && a.phases == b.phases && a.pub == b.pub && a.know == b.know &&
         a.facts == b.facts && a.roles == b.roles;
}

// ---------------------------------------------------------------------------
// parsing

namespace {

Term parse_agent(Parser& p) {
  const Token t = p.peek();
  Term a = p.term();
  if (!(a.is_var() || (a.is_basic() && a.sort() == Sort::Agent)))
    throw ParseError("'" + to_string(a) + "' is not an agent", t.line, t.column);
  return a;
}

// "*" selects every agent
Term parse_agent_or_all(Parser& p) {
  if (p.is_punct("*")) {
    p.next();
    return Term();
  }
  return parse_agent(p);
}

std::vector<Term> parse_term_list(Parser& p) {
  std::vector<Term> out{p.term()};
  while (p.is_punct(",")) {
    p.next();
    out.push_back(p.term());
  }
  return out;
}

Action parse_action_tokens(Parser& p) {
  Action a;
  const Token kw = p.peek();
  const std::string word = p.expect_ident();
  if (word == "send") {
    a.kind = ActionKind::Send;
    if (p.is_punct("*")) {
      p.next();
      a.kind = ActionKind::AnonSend;
    }
  } else if (word == "recv") {
    a.kind = ActionKind::Receive;
  } else if (word == "confirm") {
    a.kind = ActionKind::Confirm;
  } else if (word == "deny") {
    a.kind = ActionKind::Deny;
  } else if (word == "insert") {
    a.kind = ActionKind::Insert;
  } else {
    throw ParseError("unknown action '" + word + "'", kw.line, kw.column);
  }
  a.agent = parse_agent(p);
  if (a.is_send() && p.is_ident("fresh") && p.is_punct("(", 1)) {
    p.next();
    p.next();
    a.fresh = parse_term_list(p);
    p.expect_punct(")");
  }
  p.expect_punct(":");
  auto hole = [&] {
    if (!p.is_ident("_")) return false;
    p.next();
    return true;
  };
  if (a.communicates()) {
    if (!hole()) a.term = p.term();
    p.expect_punct(",");
  }
  if (!hole()) a.assertion = p.assertion();
  if (p.is_punct("@")) {
    p.next();
    a.phase = p.expect_ident();
  }
  return a;
}

bool is_action_line(std::string_view line) {
  for (std::string_view w : {"send", "recv", "confirm", "deny", "insert"}) {
    if (line.substr(0, w.size()) != w) continue;
    if (line.size() == w.size()) return true;
    const char c = line[w.size()];
    if (std::isspace(static_cast<unsigned char>(c)) || c == '*') return true;
  }
  return false;
}

}  // namespace

Action parse_action(std::string_view text, const Signature& sig, int line_no) {
  Parser p(tokenize(text, line_no), sig);
  Action a = parse_action_tokens(p);
  p.expect_end();
  return a;
}

Protocol parse_protocol(std::string_view text) {
  Protocol proto;
  std::vector<std::pair<int, std::string>> lines;
  {
    std::istringstream in{std::string(text)};
    std::string raw;
    int n = 0;
    while (std::getline(in, raw)) {
      ++n;
      std::string l = trim(strip_comment(raw));
      if (!l.empty()) lines.emplace_back(n, std::move(l));
    }
  }
  // declarations first, wherever they appear
  for (const auto& [n, l] : lines) parse_declaration(l, n, proto.sig);
  if (!proto.sig.constant_sort(std::string(kIntruder))) proto.sig.add_constant(std::string(kIntruder), Sort::Agent);

  Role* cur = nullptr;
  bool named = false;
  for (const auto& [n, l] : lines) {
    Signature scratch;
    if (parse_declaration(l, n, scratch)) continue;
    if (starts_with_word(l, "protocol")) {
      if (named) throw ParseError("duplicate protocol header", n, 1);
      proto.name = trim(l.substr(8));
      if (proto.name.empty()) throw ParseError("protocol needs a name", n, 1);
      named = true;
      continue;
    }
    if (starts_with_word(l, "phases")) {
      std::string rest = trim(l.substr(6));
      if (!rest.empty() && rest[0] == ':') rest = rest.substr(1);
      for (const std::string& ph : detail::split_list(rest)) {
        if (ph.empty()) throw ParseError("empty phase name", n, 1);
        proto.phases.push_back(ph);
      }
      continue;
    }
    Parser p(tokenize(l, n), proto.sig);
    if (starts_with_word(l, "public")) {
      p.next();
      for (const Term& t : parse_term_list(p)) {
        if (!t.is_ground()) throw ParseError("public terms must be ground: " + to_string(t), n, 1);
        proto.pub.push_back(t);
      }
      p.expect_end();
      continue;
    }
    if (starts_with_word(l, "know")) {
      p.next();
      AgentTerms k;
      k.agent = parse_agent_or_all(p);
      p.expect_punct(":");
      k.terms = parse_term_list(p);
      p.expect_end();
      for (const Term& t : k.terms)
        if (!t.is_ground()) throw ParseError("initial knowledge must be ground: " + to_string(t), n, 1);
      proto.know.push_back(std::move(k));
      continue;
    }
    if (starts_with_word(l, "fact")) {
      p.next();
      AgentFact f;
      f.agent = parse_agent_or_all(p);
      p.expect_punct(":");
      f.fact = p.assertion();
      p.expect_end();
      if (!f.fact.is_ground()) throw ParseError("initial facts must be ground", n, 1);
      proto.facts.push_back(std::move(f));
      continue;
    }
    if (starts_with_word(l, "role")) {
      p.next();
      Role r;
      r.name = p.expect_ident();
      if (proto.role(r.name)) throw ParseError("duplicate role '" + r.name + "'", n, 1);
      p.expect_punct("(");
      while (!p.is_punct(")")) {
        if (p.is_punct(",")) {
          p.next();
          continue;
        }
        const Token t = p.peek();
        std::string v = p.expect_ident();
        if (proto.sig.constant_sort(v) || is_reserved_word(v))
          throw ParseError("role parameter '" + v + "' is not a variable", t.line, t.column);
        r.params.push_back(std::move(v));
      }
      p.expect_punct(")");
      p.expect_punct(":");
      p.expect_end();
      proto.roles.push_back(std::move(r));
      cur = &proto.roles.back();
      continue;
    }
    if (is_action_line(l)) {
      if (!cur) throw ParseError("action outside a role", n, 1);
      Action a = parse_action_tokens(p);
      p.expect_end();
      if (!a.phase.empty() && !proto.phases.empty() &&
          std::find(proto.phases.begin(), proto.phases.end(), a.phase) == proto.phases.end())
        throw ParseError("unknown phase '" + a.phase + "'", n, 1);
      cur->actions.push_back(std::move(a));
      continue;
    }
    throw ParseError("unrecognized line", n, 1);
  }
  if (!named) throw ParseError("missing 'protocol NAME' header", 1, 1);
  return proto;
}

std::string print_protocol(const Protocol& p) {
  std::ostringstream os;
  os << "protocol " << p.name << '\n';
  if (!p.phases.empty()) os << "phases: " << join(p.phases, [](const std::string& s) { return s; }) << '\n';
  os << print_declarations(p.sig);
  auto terms = [](const std::vector<Term>& ts) { return join(ts, [](const Term& t) { return to_string(t); }); };
  auto who = [](const Term& a) { return a.valid() ? to_string(a) : std::string("*"); };
  if (!p.pub.empty()) os << "public " << terms(p.pub) << '\n';
  for (const AgentTerms& k : p.know) os << "know " << who(k.agent) << ": " << terms(k.terms) << '\n';
  for (const AgentFact& f : p.facts) os << "fact " << who(f.agent) << ": " << to_string(f.fact) << '\n';
  for (const Role& r : p.roles) {
    os << "\nrole " << r.name << '(' << join(r.params, [](const std::string& s) { return s; }) << "):\n";
    for (const Action& a : r.actions) os << "  " << to_string(a) << '\n';
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// static checks

std::string to_string(const Diagnostic& d) {
  std::string s = d.code + "(" + d.detail + ")";
  if (!d.role.empty()) s += " in role " + d.role;
  if (d.action >= 0) s += " at action " + std::to_string(d.action);
  return s;
}

namespace {

void key_positions(const Term& t, std::set<std::string>& out) {
  if (t.is_enc() && t.key().is_var() && !is_bound_name(t.key().name())) out.insert(t.key().name());
  for (const Term& c : t.args()) key_positions(c, out);
}

void agent_positions(const Assertion& a, std::set<std::string>& out) {
  using AK = AssertionKind;
  if ((a.is(AK::Says) || a.is(AK::SentT) || a.is(AK::SentA)) && a.agent().is_var() &&
      !is_bound_name(a.agent().name()))
    out.insert(a.agent().name());
  for (const Assertion& s : a.subs()) agent_positions(s, out);
}

std::set<std::string> with_agent(const Action& a) {
  std::set<std::string> vs;
  collect_vars(a.agent, vs);
  if (a.term) collect_vars(*a.term, vs);
  if (a.assertion) collect_free_vars(*a.assertion, vs);
  return vs;
}

}  // namespace

std::set<std::string> key_vars(const Role& r) {
  std::set<std::string> out;
  for (const Action& a : r.actions) {
    if (a.term) key_positions(*a.term, out);
    if (a.assertion)
      visit_terms(*a.assertion, [&](const Term& t, const std::set<std::string>&) { key_positions(t, out); });
  }
  // sk(x)/vk(x) take an agent, not a key
  return out;
}

std::set<std::string> agent_vars(const Role& r) {
  std::set<std::string> out;
  auto keyapp = [&](const Term& t, auto&& self) -> void {
    if (t.is_key_app() && t.args()[0].is_var()) out.insert(t.args()[0].name());
    for (const Term& c : t.args()) self(c, self);
  };
  for (const Action& a : r.actions) {
    if (a.agent.is_var()) out.insert(a.agent.name());
    if (a.term) keyapp(*a.term, keyapp);
    if (a.assertion) {
      agent_positions(*a.assertion, out);
      visit_terms(*a.assertion, [&](const Term& t, const std::set<std::string>&) { keyapp(t, keyapp); });
    }
  }
  return out;
}

std::set<std::string> role_free_vars(const Role& r) {
  std::set<std::string> bound, free;
  for (const Action& a : r.actions) {
    std::set<std::string> fresh;
    for (const Term& f : a.fresh) collect_vars(f, fresh);
    for (const std::string& v : with_agent(a)) {
      if (bound.count(v) || fresh.count(v)) continue;
      if (a.kind == ActionKind::Receive && !(a.agent.is_var() && a.agent.name() == v))
        bound.insert(v);
      else
        free.insert(v);
    }
    bound.insert(fresh.begin(), fresh.end());
  }
  free.insert(r.params.begin(), r.params.end());
  return free;
}

std::vector<Diagnostic> validate_role(const Role& r, const Protocol& p) {
  std::vector<Diagnostic> out;
  auto diag = [&](std::string code, int i, std::string detail) {
    out.push_back(Diagnostic{std::move(code), r.name, i, std::move(detail)});
  };
  const std::set<std::string> agents = agent_vars(r);
  std::set<std::string> bound(r.params.begin(), r.params.end());
  std::set<std::string> seen = bound;  // every variable met so far
  TermSet communicated;
  const Term* principal = nullptr;

  for (std::size_t idx = 0; idx < r.actions.size(); ++idx) {
    const Action& a = r.actions[idx];
    const int i = static_cast<int>(idx);
    if (!principal) {
      principal = &a.agent;
    } else if (!(a.agent == *principal)) {
      diag("principal", i, to_string(a.agent) + " acts in a role of " + to_string(*principal));
    }
    if (!a.phase.empty() && !p.phases.empty() &&
        std::find(p.phases.begin(), p.phases.end(), a.phase) == p.phases.end())
      diag("unknown-phase", i, a.phase);

    std::set<std::string> fresh;
    for (const Term& f : a.fresh) {
      if (!f.is_var()) {
        diag("fresh-not-variable", i, to_string(f));
        continue;
      }
      if (seen.count(f.name()) || !fresh.insert(f.name()).second) diag("fresh-reuse", i, f.name());
    }
    const std::set<std::string> used = with_agent(a);
    switch (a.kind) {
      case ActionKind::Send:
      case ActionKind::AnonSend:
        for (const std::string& v : used)
          if (!bound.count(v) && !fresh.count(v)) diag("unbound-variable", i, v);
        break;
      case ActionKind::Receive:
        if (a.agent.is_var() && !bound.count(a.agent.name())) diag("unbound-variable", i, a.agent.name());
        for (const std::string& v : used) bound.insert(v);
        break;
      case ActionKind::Confirm:
      case ActionKind::Deny:
      case ActionKind::Insert:
        for (const std::string& v : used)
          if (!bound.count(v)) diag("unbound-variable", i, v);
        break;
    }
    bound.insert(fresh.begin(), fresh.end());
    seen.insert(used.begin(), used.end());
    seen.insert(fresh.begin(), fresh.end());

    if (a.term) collect_subterms(*a.term, communicated);
    if (a.kind == ActionKind::Receive && a.assertion)
      for (const Term& t : reveals(*a.assertion)) collect_subterms(t, communicated);
    if (a.is_send() && a.assertion) {
      for (const Term& t : reveals(*a.assertion)) {
        std::set<std::string> vs;
        collect_vars(t, vs);
        if (vs.empty()) continue;  // protocol constants are public
        if (t.is_var() && agents.count(t.name())) continue;
        if (!communicated.count(t)) diag("reveal-violation", i, to_string(t));
      }
    }
  }
  // every predicate/constructor is declared by construction of the parser
  return out;
}

std::vector<Diagnostic> validate_protocol(const Protocol& p) {
  std::vector<Diagnostic> out;
  for (const Role& r : p.roles) {
    auto d = validate_role(r, p);
    out.insert(out.end(), d.begin(), d.end());
  }
  return out;
}

bool suitable(const TermMap& sigma, const Role& r, std::string* why) {
  auto no = [&](std::string msg) {
    if (why) *why = std::move(msg);
    return false;
  };
  const auto keys = key_vars(r);
  const auto agents = agent_vars(r);
  for (const std::string& v : role_free_vars(r))
    if (!sigma.count(v)) return no("no value for " + v);
  std::set<std::string> fresh;
  for (const Action& a : r.actions)
    for (const Term& f : a.fresh) collect_vars(f, fresh);
  for (const auto& [v, t] : sigma) {
    if (!t.is_ground()) return no(v + " maps to a non-ground term");
    if (fresh.count(v)) return no(v + " is a fresh variable");
    if (keys.count(v) && !is_key_term(t)) return no(v + " is key-sorted but maps to " + to_string(t));
    if (agents.count(v) && !(t.is_basic() && t.sort() == Sort::Agent))
      return no(v + " is agent-sorted but maps to " + to_string(t));
  }
  return true;
}

std::vector<Action> instantiate(const Role& r, const TermMap& sigma) {
  std::string why;
  if (!suitable(sigma, r, &why)) throw std::invalid_argument("unsuitable substitution for role " + r.name + ": " + why);
  std::vector<Action> out;
  out.reserve(r.actions.size());
  for (const Action& a : r.actions) out.push_back(substitute(a, sigma));
  return out;
}

}  // namespace dya
