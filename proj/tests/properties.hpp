#pragma once

// Property checks shared by the unit tests and the acceptance binary. Each
// returns the number of cases run and a description of the first failure.

#include <algorithm>
#include <sstream>

#include "dya/anonymity.hpp"
#include "dya/runtime.hpp"
#include "support.hpp"

namespace dya::testing {

struct PropertyResult {
  int cases = 0;
  int failures = 0;
  std::string first_failure;
  void fail(const std::string& what) {
    if (failures++ == 0) first_failure = what;
  }
  bool ok(int min_cases = 200) const { return failures == 0 && cases >= min_cases; }
};

// Brute force: fixpoint of the term rules over the finite universe of
// subterms of X and t, plus the inverses of keys occurring there.
inline bool dy_oracle(const TermSet& X, const Term& t) {
  TermSet U;
  for (const Term& x : X) collect_subterms(x, U);
  collect_subterms(t, U);
  TermSet inv;
  for (const Term& u : U)
    if (auto i = inverse(u)) inv.insert(*i);
  U.insert(inv.begin(), inv.end());

  TermSet D(X.begin(), X.end());
  for (bool grew = true; grew;) {
    grew = false;
    auto add = [&](const Term& u) { grew |= D.insert(u).second; };
    for (const Term& u : U) {
      if (D.count(u)) {
        if (u.is_pair()) {
          add(u.left());
          add(u.right());
        }
        if (u.is_enc()) {
          auto i = inverse(u.key());
          if (i && D.count(*i)) add(u.body());
        }
        continue;
      }
      if (u.is_var()) add(u);
      if (u.is_pair() && D.count(u.left()) && D.count(u.right())) add(u);
      if (u.is_enc() && D.count(u.body()) && D.count(u.key())) add(u);
      if (u.is_app() && !u.is_key_app()) {
        bool all = true;
        for (const Term& a : u.args()) all = all && D.count(a);
        if (all) add(u);
      }
    }
  }
  return D.count(t) > 0;
}

struct DyOracleResult {
  int instances = 0, mismatches = 0, bad_proofs = 0, positives = 0;
};

inline DyOracleResult dy_oracle_suite(int n, std::uint64_t seed) {
  Gen g(seed);
  DyOracleResult r;
  for (int i = 0; i < n; ++i) {
    TermSet X;
    const int size = 1 + g.pick(8);
    while (static_cast<int>(X.size()) < size) X.insert(g.term(3));
    // half the goals are subterms of X, which are more often derivable
    Term t = g.term(3);
    if (g.coin(50)) {
      TermSet st;
      for (const Term& x : X) collect_subterms(x, st);
      auto it = st.begin();
      std::advance(it, g.pick(static_cast<int>(st.size())));
      t = *it;
    }
    const bool expected = dy_oracle(X, t);
    auto p = dy_derive(X, t);
    ++r.instances;
    r.mismatches += expected != p.has_value();
    r.bad_proofs += p && !check_dy_proof(X, *p);
    r.positives += expected;
  }
  return r;
}

struct Instance {
  TermSet X;
  AssertionSet phi;
  Assertion goal;
};

inline std::vector<Term> universe_of(const TermSet& X) {
  TermSet st;
  for (const Term& x : X) collect_subterms(x, st);
  return {st.begin(), st.end()};
}

inline Instance random_instance(Gen& g, int phi_size = 3) {
  Instance in;
  while (in.X.size() < 3) in.X.insert(g.term(2));
  std::vector<Term> u = universe_of(in.X);
  u.push_back(g.term(1));
  for (int i = 0; i < phi_size; ++i) in.phi.insert(g.assertion(u, 2));
  // goals built from Phi's own members make positives common
  if (g.coin(40)) {
    auto it = in.phi.begin();
    std::advance(it, g.pick(static_cast<int>(in.phi.size())));
    const Assertion base = *it;
    switch (g.pick(3)) {
      case 0: in.goal = Assertion::disj(base, g.assertion(u, 1)); break;
      case 1: in.goal = base; break;
      default: in.goal = Assertion::conj(base, base); break;
    }
  } else {
    in.goal = g.assertion(u, 2);
  }
  return in;
}

inline std::string show(const Instance& in) {
  std::ostringstream os;
  os << "X={";
  for (const Term& t : in.X) os << to_string(t) << ' ';
  os << "} Phi={";
  for (const Assertion& a : in.phi) os << to_string(a) << "; ";
  os << "} goal=" << to_string(in.goal);
  return os.str();
}

inline SwapSpec toy_spec() {
  SwapSpec s;
  s.d = T("{0}k");
  s.e = T("{1}k2");
  s.p = T("k");
  s.q = T("k2");
  return s;
}

inline Term swap_term(Gen& g, int depth) {
  if (g.coin(25)) return g.pick(2) ? toy_spec().d : toy_spec().e;
  if (depth <= 0) return g.atom();
  switch (g.pick(3)) {
    case 0: return Term::pair(swap_term(g, depth - 1), swap_term(g, depth - 1));
    case 1: return Term::enc(swap_term(g, depth - 1), g.key());
    default: return g.atom();
  }
}

inline PropertyResult prop_swp(int n = 200) {
  Gen g(101);
  const SwapSpec s = toy_spec();
  const Term A = Term::basic("A", Sort::Agent);
  PropertyResult r;
  for (int i = 0; i < n; ++i, ++r.cases) {
    const Term a = swap_term(g, 3), b = swap_term(g, 3);
    if (!(swp(swp(a, s), s) == a)) r.fail("swp not an involution on " + to_string(a));
    if (!(swp(Term::pair(a, b), s) == Term::pair(swp(a, s), swp(b, s)))) r.fail("pair homomorphism");
    const Term en = Term::enc(a, g.key());
    if (en != s.d && en != s.e && !(swp(en, s) == Term::enc(swp(a, s), en.key())))
      r.fail("enc homomorphism on " + to_string(en));
    const std::vector<Term> u = {a, b, s.d, s.e};
    const Assertion x = g.assertion(u, 2), y = g.assertion(u, 2);
    if (!(swp(swp(x, s), s) == x)) r.fail("swp not an involution on " + to_string(x));
    if (!(swp(Assertion::conj(x, y), s) == Assertion::conj(swp(x, s), swp(y, s)))) r.fail("and homomorphism");
    if (!(swp(Assertion::says(A, x), s) == Assertion::says(A, swp(x, s)))) r.fail("says homomorphism");
    const AssertionSet xs{x, y};
    if (!(swp(swp(xs, s), s) == xs)) r.fail("set involution");
  }
  if (!(swp(s.d, s) == s.e && swp(s.e, s) == s.d)) r.fail("d and e not exchanged");
  return r;
}

inline PropertyResult prop_monotone(int n = 200, int* positives = nullptr) {
  Gen g(202);
  PropertyResult r;
  int pos = 0;
  while (r.cases < n) {
    const Instance in = random_instance(g);
    const Verdict v = checked_derive(in.X, in.phi, in.goal);
    if (!v.derivable) continue;
    ++r.cases;
    ++pos;
    AssertionSet more = in.phi;
    more.insert(g.assertion(universe_of(in.X), 2));
    const Verdict w = checked_derive(in.X, more, in.goal);
    if (!w.derivable && !w.exhausted) r.fail("adding to Phi lost " + show(in));
    TermSet bigger = in.X;
    bigger.insert(g.term(2));
    const Verdict z = checked_derive(bigger, in.phi, in.goal);
    if (!z.derivable && !z.exhausted) r.fail("adding to X lost " + show(in));
  }
  if (positives) *positives = pos;
  return r;
}

inline PropertyResult prop_safe_in_full(int n = 200, int* safe_positives = nullptr) {
  Gen g(303);
  PropertyResult r;
  int pos = 0;
  for (; r.cases < n; ++r.cases) {
    const Instance in = random_instance(g);
    const Verdict s = checked_derive(in.X, in.phi, in.goal, Mode::Safe);
    const Verdict f = checked_derive(in.X, in.phi, in.goal, Mode::Full);
    if (!s.derivable) continue;
    ++pos;
    if (!f.derivable && !f.exhausted) r.fail("safe but not full: " + show(in));
    if (proof_uses_unsafe(s.proof)) r.fail("safe proof uses an unsafe rule: " + show(in));
  }
  if (safe_positives) *safe_positives = pos;
  return r;
}

inline PropertyResult prop_bottom(int n = 200) {
  Gen g(404);
  // each forces two distinct basic names together
  const std::vector<const char*> clashes = {"m = n", "(0, 1) = (0, 2)", "{m}k = {n}k", "A = B",
                                            "ex z: z = m /\\ z = 1", "f(m) = f(n) /\\ m = 0"};
  PropertyResult r;
  for (; r.cases < n; ++r.cases) {
    Instance in = random_instance(g, 2);
    const Assertion clash = As(clashes[static_cast<std::size_t>(r.cases) % clashes.size()]);
    in.phi.insert(clash);
    in.X.insert(T("k"));
    const AssertionSet closed = witness_close(AssertionSet{clash}).pi;
    if (!check_bottom(congruence_close(in.X, closed))) r.fail("clash not detected: " + to_string(clash));
    if (!checked_derive(in.X, in.phi, in.goal).derivable) r.fail("no explosion: " + show(in));
    if (!contains_kind(clash, AssertionKind::Exists) &&
        !checked_derive(in.X, in.phi, in.goal, Mode::Safe).derivable)
      r.fail("no safe explosion: " + show(in));
  }
  return r;
}

inline PropertyResult prop_says(int n = 200) {
  Gen g(505);
  const Term B = Term::basic("B", Sort::Agent);
  PropertyResult r;
  for (; r.cases < n; ++r.cases) {
    const Instance in = random_instance(g);
    bool mentions_b = false;
    for (const Assertion& a : in.phi) mentions_b |= to_string(a).find("B says") != std::string::npos;
    const Assertion body = g.assertion(universe_of(in.X), 1);
    const Assertion goal = Assertion::says(B, body);
    const bool has_key = DyKnowledge(in.X).derivable(Term::sk(B));
    if (!has_key && !mentions_b && checked_derive(in.X, in.phi, goal).derivable &&
        !derive(in.X, in.phi, As("q(2, 2) /\\ C says p(2)")).derivable)
      r.fail("signed without the key: " + show(in));
    TermSet keyed = in.X;
    keyed.insert(Term::sk(B));
    const bool plain = checked_derive(keyed, in.phi, body).derivable;
    const bool signed_ = checked_derive(keyed, in.phi, goal).derivable;
    if (plain != signed_) r.fail("with sk(B), B says a differs from a: " + show(in));
  }
  return r;
}

inline bool knowledge_grows(const Knowledge& a, const Knowledge& b) {
  return std::includes(b.X.begin(), b.X.end(), a.X.begin(), a.X.end()) &&
         std::includes(b.phi.begin(), b.phi.end(), a.phi.begin(), a.phi.end());
}

inline PropertyResult prop_knowledge_monotone(int n = 200) {
  const Protocol p = builtin_foo();
  PropertyResult r;
  for (std::uint64_t seed = 0; r.cases < n; ++seed, ++r.cases) {
    const Run run = simulate(p, voting_setup(p, 2 + static_cast<int>(seed % 2)), seed);
    ProtocolState s = initial_state(p, run.setup);
    for (std::size_t i = 0; i < run.actions.size(); ++i) {
      const EnabledVerdict v = enabled(p, s, run.actions[i]);
      if (!v) {
        r.fail("seed " + std::to_string(seed) + ": step " + std::to_string(i) + " not enabled");
        break;
      }
      ProtocolState t = step(s, run.actions[i], v);
      for (const auto& [who, k] : s.agents)
        if (!knowledge_grows(k, t.of(who)))
          r.fail("seed " + std::to_string(seed) + ": " + to_string(who) + " forgot at step " + std::to_string(i));
      s = std::move(t);
    }
  }
  return r;
}

inline PropertyResult prop_roundtrip(int n = 200) {
  const Protocol p = builtin_foo();
  PropertyResult r;
  for (std::uint64_t seed = 0; r.cases < n; ++seed, ++r.cases) {
    const InitialSetup setup = voting_setup(p, 2 + static_cast<int>(seed % 2));
    const Recipes rec{seed % 5 == 0 ? RecipePolicy::Synth : RecipePolicy::Forward};
    const Run a = simulate(p, setup, seed, rec);
    const std::string tag = "seed " + std::to_string(seed) + ": ";
    if (!(simulate(p, setup, seed, rec) == a)) r.fail(tag + "simulate not deterministic");
    const std::string text = write_trace(a);
    const Run c = parse_trace(text, p);
    if (!(c == a)) r.fail(tag + "trace does not parse back");
    if (write_trace(c) != text) r.fail(tag + "trace text not stable");
    const RunCheck rc = validate_run(p, c);
    if (!rc.ok) r.fail(tag + "replay invalid: " + rc.detail);
    if (dump_knowledge(rc.final_state.intruder()) != dump_knowledge(validate_run(p, a).final_state.intruder()))
      r.fail(tag + "final knowledge differs");
  }
  return r;
}

}  // namespace dya::testing
