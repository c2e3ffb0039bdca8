#include "dya/runtime.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>

#include "dya/parse.hpp"

namespace dya {

namespace {

Term intruder_name() { return Term::basic(std::string(kIntruder), Sort::Agent); }

bool match(const Term& p, const Term& t, TermMap& s) {
  if (p.is_var()) {
    if (is_bound_name(p.name())) return p == t;
    auto it = s.find(p.name());
    if (it != s.end()) return it->second == t;
    if (!t.is_ground()) return false;  // would capture a binder
    s.emplace(p.name(), t);
    return true;
  }
  if (p.is_ground()) return p == t;
  if (p.kind() != t.kind() || p.args().size() != t.args().size()) return false;
  if (p.is_app() && p.name() != t.name()) return false;
  for (std::size_t i = 0; i < p.args().size(); ++i)
    if (!match(p.args()[i], t.args()[i], s)) return false;
  return true;
}

bool match(const Assertion& p, const Assertion& t, TermMap& s) {
  if (p.kind() != t.kind() || p.name() != t.name() || p.terms().size() != t.terms().size() ||
      p.subs().size() != t.subs().size())
    return false;
  for (std::size_t i = 0; i < p.terms().size(); ++i)
    if (!match(p.terms()[i], t.terms()[i], s)) return false;
  for (std::size_t i = 0; i < p.subs().size(); ++i)
    if (!match(p.subs()[i], t.subs()[i], s)) return false;
  return true;
}

template <class T>
bool match_opt(const std::optional<T>& p, const std::optional<T>& t, TermMap& s) {
  if (p.has_value() != t.has_value()) return false;
  return !p || match(*p, *t, s);
}

// Head `a` of a session against ground `b`; fresh variables bind to b's values.
bool match_action(const Action& a, const Action& b, TermMap& s) {
  if (a.kind != b.kind || a.fresh.size() != b.fresh.size()) return false;
  if (!match(a.agent, b.agent, s)) return false;
  for (std::size_t i = 0; i < a.fresh.size(); ++i)
    if (!match(a.fresh[i], b.fresh[i], s)) return false;
  return match_opt(a.term, b.term, s) && match_opt(a.assertion, b.assertion, s);
}

bool dy_ok(const TermSet& X, const Term& t) { return DyKnowledge(X).derivable(t); }

Action strip_phase(Action a) {
  a.phase.clear();
  return a;
}

}  // namespace

const Knowledge& ProtocolState::of(const Term& agent) const {
  auto it = agents.find(agent);
  if (it == agents.end()) throw std::out_of_range("unknown agent " + to_string(agent));
  return it->second;
}

Knowledge& ProtocolState::of(const Term& agent) {
  auto it = agents.find(agent);
  if (it == agents.end()) throw std::out_of_range("unknown agent " + to_string(agent));
  return it->second;
}

std::string_view reason_name(Reason r) {
  switch (r) {
    case Reason::Ok: return "ok";
    case Reason::NoMatchingSession: return "no-matching-session";
    case Reason::NotGround: return "not-ground";
    case Reason::FreshReused: return "fresh-reused";
    case Reason::TermUnderivable: return "term-underivable";
    case Reason::AssertionUnderivable: return "assertion-underivable";
    case Reason::DenyDerivable: return "deny-derivable";
    case Reason::DenyInconclusive: return "deny-inconclusive";
  }
  return "?";
}

std::optional<Term> Run::handle(std::size_t i) const {
  if (i >= actions.size() || !actions[i].communicates()) return std::nullopt;
  return actions[i].term;
}

// ---------------------------------------------------------------------------
// setup

std::vector<SessionSpec> parse_sessions(std::string_view text, const Protocol& p) {
  std::vector<SessionSpec> out;
  Parser ps(tokenize(text), p.sig);
  while (!ps.at_end()) {
    if (ps.is_punct(",") || ps.is_punct(";")) {
      ps.next();
      continue;
    }
    const Token at = ps.peek();
    SessionSpec s;
    s.role = ps.expect_ident();
    const Role* r = p.role(s.role);
    if (!r) throw ParseError("unknown role '" + s.role + "'", at.line, at.column);
    ps.expect_punct("(");
    std::vector<Term> args;
    while (!ps.is_punct(")")) {
      if (!args.empty()) ps.expect_punct(",");
      args.push_back(ps.term());
    }
    ps.expect_punct(")");
    if (args.size() != r->params.size())
      throw ParseError("role " + s.role + " takes " + std::to_string(r->params.size()) + " arguments", at.line,
                       at.column);
    for (std::size_t i = 0; i < args.size(); ++i) s.sigma[r->params[i]] = args[i];
    std::string why;
    if (!suitable(s.sigma, *r, &why)) throw ParseError(why, at.line, at.column);
    out.push_back(std::move(s));
  }
  return out;
}

InitialSetup voting_setup(const Protocol& p, int voters) {
  auto agent = [](const std::string& n) { return Term::basic(n, Sort::Agent); };
  auto nonce = [](const std::string& n) { return Term::basic(n, Sort::Nonce); };
  InitialSetup s;
  std::set<Term> comp;
  auto add = [&](const std::string& role, TermMap sigma) {
    if (!p.role(role)) return;
    s.sessions.push_back({role, std::move(sigma)});
  };
  for (int i = 0; i < voters; ++i) {
    const std::string V = "V" + std::to_string(i);
    add("voter", {{"id", agent(V)}, {"v", nonce(i % 2 ? "v1" : "v0")}});
  }
  for (int i = 0; i < voters; ++i) {
    const Term V = agent("V" + std::to_string(i));
    add("authority", {{"id", agent("A")}, {"V", V}});
    add("script", {{"id", agent("S")}, {"V", V}});
    add("admin", {{"id", agent("A")}, {"V", V}});
  }
  for (int i = 0; i < voters; ++i) add("counter", {{"id", agent("C")}});
  if (const Role* t = p.role("tally")) {
    TermMap sigma{{"id", agent("A")}};
    for (std::size_t i = 1; i < t->params.size(); ++i)
      sigma["W" + std::to_string(i)] = agent("V" + std::to_string(i - 1));
    if (static_cast<int>(t->params.size()) == voters + 1) add("tally", std::move(sigma));
  }
  for (const SessionSpec& ss : s.sessions) {
    const Term& id = ss.sigma.at("id");
    if (ss.role != "voter" && ss.role != "script") comp.insert(id);
  }
  s.compromised.assign(comp.begin(), comp.end());
  return s;
}

ProtocolState initial_state(const Protocol& p, const InitialSetup& setup) {
  ProtocolState st;
  const std::vector<Term> agents = p.agents();
  for (const Term& a : agents) {
    Knowledge k;
    k.X.insert(Term::sk(a));
    for (const Term& b : agents) {
      k.X.insert(b);
      k.X.insert(Term::vk(b));
    }
    k.X.insert(p.pub.begin(), p.pub.end());
    for (const AgentTerms& t : p.know)
      if (!t.agent.valid() || t.agent == a) k.X.insert(t.terms.begin(), t.terms.end());
    for (const AgentFact& f : p.facts)
      if (!f.agent.valid() || f.agent == a) k.phi.insert(f.fact);
    st.agents.emplace(a, std::move(k));
  }
  Knowledge& I = st.of(intruder_name());
  for (const Term& c : setup.compromised) {
    const TermSet X = st.of(c).X;
    I.X.insert(X.begin(), X.end());
  }
  I.X.insert(setup.intruder_terms.begin(), setup.intruder_terms.end());

  int id = 0;
  for (const SessionSpec& spec : setup.sessions) {
    const Role* r = p.role(spec.role);
    if (!r) throw std::invalid_argument("unknown role " + spec.role);
    Session s;
    s.id = id++;
    s.role = spec.role;
    s.actions = instantiate(*r, spec.sigma);
    s.key_vars = key_vars(*r);
    st.sessions.push_back(std::move(s));
  }
  return st;
}

// ---------------------------------------------------------------------------
// transitions

namespace {

EnabledVerdict conditions(const Protocol& p, const ProtocolState& s, const Session& sess, const Action& b,
                          TermMap sigma, const SearchBudget& budget) {
  EnabledVerdict v;
  v.session = sess.id;
  v.sigma = std::move(sigma);
  if (!b.ground()) {
    v.reason = Reason::NotGround;
    return v;
  }
  const Knowledge* kp = nullptr;
  try {
    kp = &s.of(b.agent);
  } catch (const std::out_of_range&) {
    v.reason = Reason::NoMatchingSession;
    return v;
  }
  const Knowledge& k = *kp;
  const Action& a = sess.actions[sess.pc];
  switch (b.kind) {
    case ActionKind::Send:
    case ActionKind::AnonSend: {
      TermSet X = k.X;
      for (std::size_t i = 0; i < b.fresh.size(); ++i) {
        const Term& m = b.fresh[i];
        const bool key = a.fresh[i].is_var() && sess.key_vars.count(a.fresh[i].name());
        const Sort want = key ? Sort::Key : Sort::Nonce;
        if (!m.is_basic() || m.sort() != want || s.used.count(m) || p.sig.constant_sort(m.name()) ||
            std::count(b.fresh.begin(), b.fresh.end(), m) > 1) {
          v.reason = Reason::FreshReused;
          return v;
        }
        for (const auto& [who, kk] : s.agents)
          if (std::any_of(kk.X.begin(), kk.X.end(), [&](const Term& t) { return occurs(m, t); })) {
            v.reason = Reason::FreshReused;
            return v;
          }
        X.insert(m);
      }
      if (b.term && !dy_ok(X, *b.term)) {
        v.reason = Reason::TermUnderivable;
        return v;
      }
      if (b.assertion && !derive(X, k.phi, *b.assertion, Mode::Safe, budget).derivable) {
        v.reason = Reason::AssertionUnderivable;
        return v;
      }
      break;
    }
    case ActionKind::Receive: {
      const Knowledge& I = s.intruder();
      if (b.term && !dy_ok(I.X, *b.term)) {
        v.reason = Reason::TermUnderivable;
        return v;
      }
      if (b.assertion && !derive(I.X, I.phi, *b.assertion, Mode::Safe, budget).derivable) {
        v.reason = Reason::AssertionUnderivable;
        return v;
      }
      break;
    }
    case ActionKind::Confirm:
      if (!derive(k.X, k.phi, *b.assertion, Mode::Full, budget).derivable) {
        v.reason = Reason::AssertionUnderivable;
        return v;
      }
      break;
    case ActionKind::Deny: {
      Verdict d = derive(k.X, k.phi, *b.assertion, Mode::Full, budget);
      if (d.derivable) {
        v.reason = Reason::DenyDerivable;
        return v;
      }
      if (d.exhausted) {
        v.reason = Reason::DenyInconclusive;
        v.warning = "deny blocked: " + d.note;
        return v;
      }
      break;
    }
    case ActionKind::Insert:
      break;
  }
  v.reason = Reason::Ok;
  return v;
}

}  // namespace

EnabledVerdict enabled(const Protocol& p, const ProtocolState& s, const Action& b, const SearchBudget& budget) {
  EnabledVerdict first;
  bool matched = false;
  for (const Session& sess : s.sessions) {
    if (sess.done()) continue;
    TermMap sigma = sess.sigma;
    const Action& a = sess.actions[sess.pc];
    if (!match_action(substitute(a, sess.sigma), b, sigma)) continue;
    EnabledVerdict v = conditions(p, s, sess, b, std::move(sigma), budget);
    if (v) return v;
    if (!matched) first = std::move(v);
    matched = true;
  }
  return first;
}

ProtocolState step(const ProtocolState& s, const Action& b, const EnabledVerdict& v) {
  if (!v) throw std::logic_error("step on a disabled action");
  ProtocolState n = s;
  Session& sess = n.sessions.at(static_cast<std::size_t>(v.session));
  sess.sigma = v.sigma;
  sess.fresh_used += b.fresh.size();
  ++sess.pc;
  Knowledge& k = n.of(b.agent);
  Knowledge& I = n.of(intruder_name());
  switch (b.kind) {
    case ActionKind::Send:
    case ActionKind::AnonSend:
      for (const Term& m : b.fresh) {
        k.X.insert(m);
        n.used.insert(m);
      }
      if (b.term) I.X.insert(*b.term);
      if (b.assertion) I.phi.insert(*b.assertion);
      if (b.kind == ActionKind::Send) {
        if (b.term) I.phi.insert(Assertion::sent_term(b.agent, *b.term));
        if (b.assertion) I.phi.insert(Assertion::sent_assertion(b.agent, *b.assertion));
      }
      n.traffic.push_back({b.term, b.assertion});
      break;
    case ActionKind::Receive:
      if (b.term) k.X.insert(*b.term);
      if (b.assertion) k.phi.insert(*b.assertion);
      break;
    case ActionKind::Insert:
      k.phi.insert(*b.assertion);
      if (Context(k.X, k.phi, Mode::Full).bottom_everywhere())
        n.lints.push_back("insert makes the knowledge of " + to_string(b.agent) + " inconsistent: " +
                          to_string(*b.assertion));
      break;
    case ActionKind::Confirm:
    case ActionKind::Deny:
      break;
  }
  return n;
}

// ---------------------------------------------------------------------------
// scheduling

namespace {

std::string fresh_value(const Session& s, std::size_t j, bool key) {
  return std::string(key ? "k#" : "n#") + std::to_string(s.id) + "#" + std::to_string(s.fresh_used + j);
}

// Terms the intruder can offer beyond forwarding: the analysis closure and,
// for depth >= 2, pairs of it.
std::vector<Term> synth_terms(const ProtocolState& s, int depth) {
  const DyKnowledge dy(s.intruder().X);
  std::vector<Term> out(dy.analyzed().begin(), dy.analyzed().end());
  if (depth >= 2) {
    const std::size_t n = std::min<std::size_t>(out.size(), 24);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) out.push_back(Term::pair(out[i], out[j]));
  }
  return out;
}

void receive_candidates(const ProtocolState& s, const Action& a, const Recipes& r, std::vector<Action>& out) {
  auto emit = [&](const TermMap& sigma) {
    Action b = substitute(a, sigma);
    if (b.ground()) out.push_back(strip_phase(std::move(b)));
  };
  for (const Traffic& t : s.traffic) {
    TermMap sigma;
    if (a.term && (!t.term || !match(*a.term, *t.term, sigma))) continue;
    if (a.assertion && (!t.assertion || !match(*a.assertion, *t.assertion, sigma))) continue;
    emit(sigma);
  }
  if (r.policy != RecipePolicy::Synth || !a.term) return;
  std::vector<Assertion> facts;
  if (a.assertion)
    for (const Assertion& f : s.intruder().phi) facts.push_back(f);
  for (const Term& c : synth_terms(s, r.depth)) {
    TermMap sigma;
    if (!match(*a.term, c, sigma)) continue;
    if (!a.assertion) {
      emit(sigma);
      continue;
    }
    for (const Assertion& f : facts) {
      TermMap s2 = sigma;
      if (match(*a.assertion, f, s2)) emit(s2);
    }
  }
}

}  // namespace

std::vector<Action> enabled_actions(const Protocol& p, const ProtocolState& s, const Recipes& recipes,
                                    const SearchBudget& budget) {
  struct Cand {
    Action b;
    int phase;
  };
  std::vector<Cand> found;
  for (const Session& sess : s.sessions) {
    if (sess.done()) continue;
    const Action a = sess.head();
    const int phase = p.phase_index(a.phase);
    std::vector<Action> cands;
    if (a.kind == ActionKind::Receive) {
      receive_candidates(s, a, recipes, cands);
    } else {
      TermMap fresh;
      for (std::size_t j = 0; j < a.fresh.size(); ++j) {
        if (!a.fresh[j].is_var()) continue;
        const bool key = sess.key_vars.count(a.fresh[j].name()) > 0;
        fresh[a.fresh[j].name()] = Term::basic(fresh_value(sess, j, key), key ? Sort::Key : Sort::Nonce);
      }
      Action b = strip_phase(substitute(a, fresh));
      if (b.ground()) cands.push_back(std::move(b));
    }
    for (Action& b : cands) {
      if (std::any_of(found.begin(), found.end(), [&](const Cand& c) { return c.b == b; })) continue;
      if (enabled(p, s, b, budget)) found.push_back({std::move(b), phase});
    }
  }
  std::vector<Action> out;
  if (found.empty()) return out;
  int lo = found.front().phase;
  if (!p.phases.empty())
    for (const Cand& c : found) lo = std::min(lo, c.phase);
  for (Cand& c : found)
    if (p.phases.empty() || c.phase == lo) out.push_back(std::move(c.b));
  return out;
}

Run simulate(const Protocol& p, const InitialSetup& setup, std::uint64_t seed, const Recipes& recipes,
             std::size_t max_steps, const SearchBudget& budget) {
  Run run;
  run.protocol = p.name;
  run.seed = seed;
  run.setup = setup;
  ProtocolState st = initial_state(p, setup);
  std::mt19937_64 rng(seed);
  while (run.actions.size() < max_steps) {
    std::vector<Action> opts = enabled_actions(p, st, recipes, budget);
    if (opts.empty()) break;
    const Action& b = opts[rng() % opts.size()];
    EnabledVerdict v = enabled(p, st, b, budget);
    st = step(st, b, v);
    run.actions.push_back(b);
  }
  return run;
}

RunCheck validate_run(const Protocol& p, const Run& run, const SearchBudget& budget) {
  RunCheck rc;
  try {
    rc.final_state = initial_state(p, run.setup);
  } catch (const std::exception& e) {
    rc.detail = e.what();
    rc.reason = Reason::NoMatchingSession;
    return rc;
  }
  for (std::size_t i = 0; i < run.actions.size(); ++i) {
    const Action& b = run.actions[i];
    EnabledVerdict v = enabled(p, rc.final_state, b, budget);
    if (!v.warning.empty()) rc.warnings.push_back(v.warning);
    if (!v) {
      rc.failed_at = i;
      rc.reason = v.reason;
      rc.detail = "step " + std::to_string(i) + " (" + to_string(b) + "): " + std::string(reason_name(v.reason));
      return rc;
    }
    rc.final_state = step(rc.final_state, b, v);
    rc.session_of.push_back(v.session);
  }
  rc.ok = true;
  rc.failed_at = run.actions.size();
  rc.reason = Reason::Ok;
  return rc;
}

}  // namespace dya
