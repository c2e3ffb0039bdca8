#pragma once

#include <random>
#include <string>
#include <vector>

#include "dya/checker.hpp"
#include "dya/engine.hpp"
#include "dya/parse.hpp"

namespace dya::testing {

inline Signature small_sig() {
  Signature s;
  for (const char* a : {"A", "B", "C"}) s.add_constant(a, Sort::Agent);
  for (const char* n : {"m", "n", "0", "1", "2"}) s.add_constant(n, Sort::Nonce);
  for (const char* k : {"k", "k2", "k3"}) s.add_constant(k, Sort::Key);
  s.add_predicate("p", 1);
  s.add_predicate("q", 2);
  s.add_constructor("f", 1);
  return s;
}

inline Term T(const std::string& s) { return parse_term(s, small_sig()); }
inline Assertion As(const std::string& s) { return parse_assertion(s, small_sig()); }

inline TermSet terms(std::initializer_list<const char*> xs) {
  TermSet out;
  for (const char* x : xs) out.insert(T(x));
  return out;
}
inline AssertionSet assertions(std::initializer_list<const char*> xs) {
  AssertionSet out;
  for (const char* x : xs) out.insert(As(x));
  return out;
}

struct ProofTally {
  std::size_t derivable = 0, checked = 0;
};
inline ProofTally& proof_tally() {
  static ProofTally t;
  return t;
}

/// derive, and replay every positive verdict through the independent checker.
inline Verdict checked_derive(const TermSet& X, const AssertionSet& phi, const Assertion& goal,
                              Mode mode = Mode::Full, const SearchBudget& b = {}) {
  Verdict v = derive(X, phi, goal, mode, b);
  if (v.derivable) {
    ++proof_tally().derivable;
    if (check_proof(X, phi, v.proof, goal)) ++proof_tally().checked;
  }
  return v;
}

/// Random ground terms over a small vocabulary.
class Gen {
public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  int pick(int n) { return static_cast<int>(rng_() % static_cast<std::uint64_t>(n)); }
  bool coin(int percent) { return pick(100) < percent; }

  Term atom() {
    static const std::vector<Term> atoms = {
        Term::basic("A", Sort::Agent), Term::basic("B", Sort::Agent), Term::basic("m", Sort::Nonce),
        Term::basic("n", Sort::Nonce), Term::basic("0", Sort::Nonce), Term::basic("1", Sort::Nonce),
        Term::basic("k", Sort::Key),   Term::basic("k2", Sort::Key),  Term::basic("k3", Sort::Key),
        Term::sk(Term::basic("A", Sort::Agent)), Term::vk(Term::basic("A", Sort::Agent))};
    return atoms[pick(static_cast<int>(atoms.size()))];
  }
  Term key() {
    static const std::vector<Term> keys = {Term::basic("k", Sort::Key), Term::basic("k2", Sort::Key),
                                           Term::basic("k3", Sort::Key), Term::sk(Term::basic("A", Sort::Agent)),
                                           Term::vk(Term::basic("A", Sort::Agent))};
    return keys[pick(static_cast<int>(keys.size()))];
  }
  Term term(int depth) {
    if (depth <= 0 || coin(30)) return atom();
    switch (pick(3)) {
      case 0: return Term::pair(term(depth - 1), term(depth - 1));
      case 1: return Term::enc(term(depth - 1), key());
      default: return Term::app("f", {term(depth - 1)});
    }
  }

  /// Ground assertion; `universe` supplies terms to talk about.
  Assertion assertion(const std::vector<Term>& universe, int depth) {
    auto t = [&] { return universe[pick(static_cast<int>(universe.size()))]; };
    if (depth <= 0 || coin(25)) {
      switch (pick(3)) {
        case 0: return Assertion::eq(t(), t());
        case 1: return Assertion::pred("p", {t()});
        default: return Assertion::pred("q", {t(), t()});
      }
    }
    switch (pick(5)) {
      case 0: return Assertion::conj(assertion(universe, depth - 1), assertion(universe, depth - 1));
      case 1: return Assertion::disj(assertion(universe, depth - 1), assertion(universe, depth - 1));
      case 2: return Assertion::says(pick(2) ? Term::basic("A", Sort::Agent) : Term::basic("B", Sort::Agent),
                                     assertion(universe, depth - 1));
      case 3: {
        // hide one occurrence of a universe term behind a variable
        Assertion body = assertion(universe, depth - 1);
        const Term hidden = t();
        Assertion abs = map_terms(body, [&](const Term& x) {
          return replace_terms(x, [&](const Term& y) -> std::optional<Term> {
            if (y == hidden) return Term::var("z");
            return std::nullopt;
          });
        });
        return Assertion::exists("z", abs);
      }
      default: return Assertion::pred("p", {Term::pair(t(), t())});
    }
  }

  std::mt19937_64& rng() { return rng_; }

private:
  std::mt19937_64 rng_;
};

}  // namespace dya::testing
