#include "dya/anonymity.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <map>
#include <random>

namespace dya {

// ---------------------------------------------------------------------------
// swp

Term swp(const Term& t, const SwapSpec& s) {
  return replace_terms(t, [&](const Term& x) -> std::optional<Term> {
    if (x == s.d) return s.e;
    if (x == s.e) return s.d;
    return std::nullopt;
  });
}

Assertion swp(const Assertion& a, const SwapSpec& s) {
  return map_terms(a, [&](const Term& t) { return swp(t, s); });
}

TermSet swp(const TermSet& ts, const SwapSpec& s) {
  TermSet out;
  for (const Term& t : ts) out.insert(swp(t, s));
  return out;
}

AssertionSet swp(const AssertionSet& as, const SwapSpec& s) {
  AssertionSet out;
  for (const Assertion& a : as) out.insert(swp(a, s));
  return out;
}

namespace {

Term exchange(const Term& t, const Term& a, const Term& b) {
  return replace_terms(t, [&](const Term& x) -> std::optional<Term> {
    if (x == a) return b;
    if (x == b) return a;
    return std::nullopt;
  });
}

Action map_action(const Action& a, const std::function<Term(const Term&)>& f) {
  Action b = a;
  b.agent = f(a.agent);
  for (Term& m : b.fresh) m = f(m);
  if (b.term) b.term = f(*a.term);
  if (b.assertion) b.assertion = map_terms(*a.assertion, f);
  return b;
}

const SessionSpec* find_voter(const Run& run, const char* id, const char* vote, int* index) {
  for (std::size_t n = 0; n < run.setup.sessions.size(); ++n) {
    const SessionSpec& s = run.setup.sessions[n];
    if (s.role != "voter") continue;
    auto a = s.sigma.find("id");
    auto v = s.sigma.find("v");
    if (a == s.sigma.end() || v == s.sigma.end()) continue;
    if (to_string(a->second) == id && to_string(v->second) == vote) {
      *index = static_cast<int>(n);
      return &s;
    }
  }
  return nullptr;
}

}  // namespace

// ---------------------------------------------------------------------------
// swapped run

SwapSpec find_swap_spec(const Protocol& p, const Run& run, bool require_anonymous) {
  SwapSpec spec;
  std::size_t voters = 0;
  for (const SessionSpec& s : run.setup.sessions) voters += s.role == "voter";
  if (voters < 2) throw AnonymityError("a run with a single voter links the vote trivially; need two voter sessions");
  if (!find_voter(run, "V0", "v0", &spec.eta0) || !find_voter(run, "V1", "v1", &spec.eta1))
    throw AnonymityError("run has no (0,0)-session (V0 voting v0) and (1,1)-session (V1 voting v1)");
  RunCheck rc = validate_run(p, run);
  if (!rc.ok) throw AnonymityError("source run is not valid: " + rc.detail);

  auto locate = [&](int eta, std::size_t& first, std::size_t& cast) {
    std::vector<std::size_t> steps;
    for (std::size_t m = 0; m < rc.session_of.size(); ++m)
      if (rc.session_of[m] == eta) steps.push_back(m);
    const Session& sess = rc.final_state.sessions.at(static_cast<std::size_t>(eta));
    if (!sess.done()) throw AnonymityError("voter session " + std::to_string(eta) + " is not fully played");
    std::vector<std::size_t> sends;
    for (std::size_t m : steps)
      if (run.actions[m].is_send()) sends.push_back(m);
    if (sends.size() < 2) throw AnonymityError("voter session needs an authorization send and a cast");
    first = sends.front();
    cast = sends.back();
    if (require_anonymous && run.actions[cast].kind != ActionKind::AnonSend)
      throw AnonymityError("step " + std::to_string(cast) + " is not an anonymous send");
  };
  locate(spec.eta0, spec.i, spec.k);
  locate(spec.eta1, spec.j, spec.l);
  const Action& ai = run.actions[spec.i];
  const Action& aj = run.actions[spec.j];
  if (!ai.term || !aj.term || ai.fresh.empty() || aj.fresh.empty())
    throw AnonymityError("authorization sends carry no fresh ciphertext");
  spec.d = *ai.term;
  spec.e = *aj.term;
  spec.p = ai.fresh.front();
  spec.q = aj.fresh.front();
  spec.V0 = ai.agent;
  spec.V1 = aj.agent;
  if (spec.d == spec.e) throw AnonymityError("d and e coincide");
  return spec;
}

Run build_swapped_run(const Run& run, const SwapSpec& spec, bool require_anonymous) {
  if (spec.d == spec.e) throw AnonymityError("d and e coincide");
  if (spec.k >= run.actions.size() || spec.l >= run.actions.size() || spec.eta0 < 0 || spec.eta1 < 0)
    throw AnonymityError("swap spec does not fit the run");
  for (std::size_t m : {spec.k, spec.l}) {
    const ActionKind kind = run.actions[m].kind;
    if (!(kind == ActionKind::AnonSend || (!require_anonymous && kind == ActionKind::Send)))
      throw AnonymityError("step " + std::to_string(m) + " is not an anonymous send");
  }
  Run out = run;
  auto& s0 = out.setup.sessions.at(static_cast<std::size_t>(spec.eta0)).sigma;
  auto& s1 = out.setup.sessions.at(static_cast<std::size_t>(spec.eta1)).sigma;
  std::swap(s0.at("v"), s1.at("v"));
  for (std::size_t m = 0; m < run.actions.size(); ++m) {
    const Action& a = run.actions[m];
    if (m == spec.k || m == spec.l) {
      out.actions[m] = map_action(a, [&](const Term& t) { return exchange(t, spec.V0, spec.V1); });
    } else {
      Action b = map_action(a, [&](const Term& t) { return swp(t, spec); });
      for (Term& f : b.fresh) f = exchange(f, spec.p, spec.q);
      out.actions[m] = std::move(b);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// tests

Assertion TestAssertion::instance(const Run& run) const {
  TermMap sigma;
  for (std::size_t n = 0; n < handles.size(); ++n) {
    auto t = run.handle(handles[n]);
    if (!t) throw AnonymityError("action " + std::to_string(handles[n]) + " communicates no term");
    sigma["x" + std::to_string(n + 1)] = *t;
  }
  return substitute(tmpl, sigma);
}

std::string TestAssertion::describe() const {
  std::string s = to_string(tmpl) + "  @";
  for (std::size_t n = 0; n < handles.size(); ++n) s += (n ? "," : "") + std::to_string(handles[n]);
  return s;
}

namespace {

struct Gen {
  std::mt19937_64 rng;
  std::vector<Term> consts;
  std::vector<Term> agents;
  std::vector<std::pair<std::string, int>> preds;

  std::size_t pick(std::size_t n) { return static_cast<std::size_t>(rng() % n); }
  Term x(int k) { return Term::var("x" + std::to_string(pick(static_cast<std::size_t>(k)) + 1)); }
  Term constant() { return consts[pick(consts.size())]; }
  Term agent() { return agents[pick(agents.size())]; }
  Term key() { return pick(2) ? Term::vk(agent()) : Term::sk(agent()); }
  Term leaf(int k) { return pick(2) ? x(k) : constant(); }

  Term term(int k, int d) {
    if (d <= 1 || pick(3) == 0) return leaf(k);
    if (pick(2)) return Term::pair(term(k, d - 1), term(k, d - 1));
    return Term::enc(term(k, d - 1), key());
  }

  Assertion atom(int k) {
    switch (pick(4)) {
      case 0: return Assertion::eq(x(k), pick(2) ? x(k) : constant());
      case 1: {
        if (preds.empty()) return Assertion::eq(x(k), constant());
        const auto& [name, arity] = preds[pick(preds.size())];
        std::vector<Term> args;
        for (int n = 0; n < arity; ++n) args.push_back(leaf(k));
        return Assertion::pred(name, std::move(args));
      }
      case 2: return Assertion::sent_term(agent(), x(k));
      default: return Assertion::eq(x(k), term(k, 2));
    }
  }

  // hidden-witness shapes, including the leak shape ex y: x = {c}y
  Assertion hidden(int k) {
    const Term y = Term::var("y"), z = Term::var("z");
    const Term h = x(k), c = constant();
    switch (pick(7)) {
      case 0: return Assertion::exists("y", Assertion::eq(h, Term::enc(c, y)));
      case 1: return Assertion::exists("y", Assertion::eq(h, Term::pair(y, c)));
      case 2: return Assertion::exists("y", Assertion::eq(h, Term::pair(c, y)));
      case 3:
        return Assertion::exists("y", Assertion::exists("z", Assertion::eq(h, Term::pair(Term::enc(y, z), z))));
      case 4: return Assertion::exists("y", Assertion::eq(h, Term::pair(Term::enc(c, y), y)));
      case 5: {
        Assertion body = Assertion::eq(h, Term::enc(y, z));
        if (!preds.empty() && preds.front().second == 1)
          body = Assertion::conj(body, Assertion::pred(preds.front().first, {y}));
        return Assertion::exists("y", Assertion::exists("z", body));
      }
      default: return Assertion::exists("y", Assertion::eq(h, Term::enc(y, key())));
    }
  }

  Assertion gen(int k, int d) {
    if (d <= 1) return atom(k);
    switch (pick(6)) {
      case 0: return atom(k);
      case 1: return hidden(k);
      case 2: return Assertion::says(agent(), gen(k, d - 1));
      case 3: return Assertion::conj(gen(k, d - 1), gen(k, d - 1));
      case 4: return Assertion::disj(gen(k, d - 1), gen(k, d - 1));
      default: return Assertion::exists("y", Assertion::conj(Assertion::eq(x(k), Term::enc(Term::var("y"), key())),
                                                             gen(k, d - 1)));
    }
  }
};

}  // namespace

std::vector<TestAssertion> generate_tests(const Protocol& p, const Run& run, int depth, int count,
                                          std::uint64_t seed) {
  if (depth < 1) throw std::invalid_argument("test depth must be at least 1");
  std::vector<std::size_t> handles;
  for (std::size_t m = 0; m < run.actions.size(); ++m)
    if (run.handle(m)) handles.push_back(m);
  std::vector<TestAssertion> out;
  if (handles.empty() || count <= 0) return out;
  std::set<std::string> seen;
  auto push = [&](TestAssertion t) {
    if (static_cast<int>(out.size()) >= count) return;
    if (seen.insert(t.describe()).second) out.push_back(std::move(t));
  };

  std::set<Term> acting;
  for (const Action& a : run.actions) acting.insert(a.agent);
  for (std::size_t h : handles)
    for (const Term& a : acting) push({Assertion::sent_term(a, Term::var("x1")), {h}});

  Gen g{std::mt19937_64(seed), {}, {}, {}};
  for (const Term& t : p.pub) g.consts.push_back(t);
  for (const Term& a : p.agents()) {
    g.consts.push_back(a);
    if (to_string(a) != kIntruder) g.agents.push_back(a);
  }
  for (const auto& [n, a] : p.sig.predicates) g.preds.emplace_back(n, a);
  if (g.agents.empty()) return out;

  const int kmax = std::min<int>(3, static_cast<int>(handles.size()));
  for (std::size_t attempt = 0; static_cast<int>(out.size()) < count && attempt < 40u * static_cast<std::size_t>(count);
       ++attempt) {
    const int k = 1 + static_cast<int>(g.pick(static_cast<std::size_t>(kmax)));
    const int d = 1 + static_cast<int>(g.pick(static_cast<std::size_t>(depth)));
    Assertion a = g.gen(k, d);
    // keep only the handles that occur, renumbered in order
    std::set<std::string> fv = free_vars(a);
    TermMap rename;
    int used = 0;
    for (int n = 1; n <= k; ++n)
      if (fv.count("x" + std::to_string(n))) rename["x" + std::to_string(n)] = Term::var("x" + std::to_string(++used));
    if (used == 0) continue;
    a = substitute(a, rename);
    std::vector<std::size_t> pool = handles;
    std::vector<std::size_t> chosen;
    for (int n = 0; n < used; ++n) {
      const std::size_t at = g.pick(pool.size());
      chosen.push_back(pool[at]);
      pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(at));
    }
    std::sort(chosen.begin(), chosen.end());
    push({a, chosen});
  }
  return out;
}

IndistVerdict check_indistinguishable(const Run& run, const Run& swapped, const Knowledge& left,
                                      const Knowledge& right, const std::vector<TestAssertion>& tests,
                                      const SearchBudget& budget) {
  IndistVerdict v;
  if (run.actions.size() != swapped.actions.size()) throw AnonymityError("runs differ in length");
  const Context L(left.X, left.phi, Mode::Full, budget);
  const Context R(right.X, right.phi, Mode::Full, budget);
  const Context C(left.X, witness_close(left.phi).pi, Mode::Safe, budget);
  std::vector<Assertion> lg, rg;
  lg.reserve(tests.size());
  rg.reserve(tests.size());
  for (const TestAssertion& t : tests) {
    lg.push_back(t.instance(run));
    rg.push_back(t.instance(swapped));
  }
  const std::vector<TestRecord> recs = run_battery(L, R, &C, lg, rg);
  v.tests_run = recs.size();
  for (std::size_t n = 0; n < recs.size(); ++n) {
    const TestRecord& r = recs[n];
    v.closure_findings += r.closure_finding;
    switch (r.result) {
      case TestResult::Agree:
        ++v.agreed;
        break;
      case TestResult::Inconclusive:
        ++v.inconclusive;
        break;
      case TestResult::Differ:
        if (!v.distinguisher) {
          v.indistinguishable = false;
          v.distinguisher = tests[n];
          v.left_instance = lg[n];
          v.right_instance = rg[n];
          v.left_derives = r.left;
        }
        break;
    }
  }
  return v;
}

// ---------------------------------------------------------------------------
// safety

SafetyResult check_safety(const TermSet& X, const AssertionSet& pi, const SwapSpec& spec, const SearchBudget& budget) {
  std::vector<AssertionSet> branches;
  try {
    branches = case_split(pi, budget.branch_cap);
  } catch (const BranchOverflow& e) {
    return {false, e.what()};
  }
  const TermSet focus{spec.d, spec.e, spec.p, spec.q};
  for (std::size_t b = 0; b < branches.size(); ++b) {
    Classes c = congruence_close(X, branches[b], focus, budget.merge_cap);
    if (c.graph.exhausted()) return {false, "merge budget exhausted"};
    for (const Term& t : focus) {
      const int n = *c.graph.lookup(t);
      for (int m : c.graph.members(n)) {
        const Term& u = c.graph.term(m);
        if (u == t) continue;
        const bool key = t == spec.p || t == spec.q;
        TermSet atoms;
        collect_atoms(u, atoms);
        const bool vars_only = std::all_of(atoms.begin(), atoms.end(), [](const Term& a) { return a.is_var(); });
        if (key || !vars_only)
          return {false, "branch " + std::to_string(b) + ": " + to_string(t) + " = " + to_string(u)};
      }
    }
  }
  return {true, std::to_string(branches.size()) + " branch(es) clean"};
}

// ---------------------------------------------------------------------------
// pipeline

bool SeedReport::pass() const {
  return failure.empty() && run_valid && swapped_valid && swp_X && swp_phi && safety_left && safety_right &&
         tests.indistinguishable && tests.inconclusive == 0 && tests.agreed == tests.tests_run && tests.tests_run > 0;
}

bool AnonymityReport::all_pass() const {
  return !seeds.empty() && std::all_of(seeds.begin(), seeds.end(), [](const SeedReport& s) { return s.pass(); });
}

bool AnonymityReport::any_inconclusive() const {
  return std::any_of(seeds.begin(), seeds.end(), [](const SeedReport& s) { return s.tests.inconclusive > 0; });
}

SeedReport check_anonymity_seed(const Protocol& p, const InitialSetup& setup, std::uint64_t seed,
                                const AnonymityConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  SeedReport r;
  r.seed = seed;
  for (const SessionSpec& s : setup.sessions) r.voters += s.role == "voter";
  try {
    const Run run = simulate(p, setup, seed, {}, 1000, cfg.budget);
    r.trace = write_trace(run);
    const RunCheck rc = validate_run(p, run, cfg.budget);
    r.run_valid = rc.ok;
    const SwapSpec spec = find_swap_spec(p, run, cfg.require_anonymous);
    const Run swapped = build_swapped_run(run, spec, cfg.require_anonymous);
    r.swapped_trace = write_trace(swapped);
    const RunCheck rc2 = validate_run(p, swapped, cfg.budget);
    r.swapped_valid = rc2.ok;
    if (!rc2.ok) r.failure = "swapped run invalid: " + rc2.detail;
    const Knowledge& K = rc.final_state.intruder();
    const Knowledge& K2 = rc2.final_state.intruder();
    r.swp_X = K2.X == swp(K.X, spec);
    r.swp_phi = K2.phi == swp(K.phi, spec);
    r.safety_left = check_safety(K.X, witness_close(K.phi).pi, spec, cfg.budget).safe;
    r.safety_right = check_safety(K2.X, witness_close(K2.phi).pi, spec, cfg.budget).safe;
    const auto tests = generate_tests(p, run, cfg.depth, cfg.tests, seed);
    r.tests = check_indistinguishable(run, swapped, K, K2, tests, cfg.budget);
  } catch (const std::exception& e) {
    r.failure = e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

AnonymityReport check_anonymity_foo(const Protocol& p, const AnonymityConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  AnonymityReport rep;
  rep.protocol = p.name;
  for (std::uint64_t seed : cfg.seeds) {
    const int voters = 2 + static_cast<int>(seed % 3);
    rep.seeds.push_back(check_anonymity_seed(p, voting_setup(p, voters), seed, cfg));
  }
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

}  // namespace dya
