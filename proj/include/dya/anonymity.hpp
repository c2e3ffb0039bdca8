#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dya/engine.hpp"
#include "dya/runtime.hpp"

namespace dya {

class AnonymityError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct SwapSpec {
  Term d, e;        // first-phase ciphertexts of the two voter sessions
  Term p, q;        // their fresh keys
  Term V0, V1;      // voter names exchanged at k and l
  std::size_t i = 0, j = 0, k = 0, l = 0;
  int eta0 = -1, eta1 = -1;  // session ids of the (0,0)- and (1,1)-sessions
};

Term swp(const Term& t, const SwapSpec& s);
Assertion swp(const Assertion& a, const SwapSpec& s);
TermSet swp(const TermSet& ts, const SwapSpec& s);
AssertionSet swp(const AssertionSet& as, const SwapSpec& s);

/// Locates the (0,0)- and (1,1)-voter sessions (voter V0 voting v0, voter V1
/// voting v1) and their authorization and cast steps. With
/// `require_anonymous`, the casts must be anonymous sends.
SwapSpec find_swap_spec(const Protocol& p, const Run& run, bool require_anonymous = true);

/// The run with the two votes exchanged: every step is swp'd (and the fresh
/// keys p, q trade places) except the two casts, where the voter names swap.
Run build_swapped_run(const Run& run, const SwapSpec& spec, bool require_anonymous = true);

struct TestAssertion {
  Assertion tmpl;                    // free variables x1..xk
  std::vector<std::size_t> handles;  // action indices, increasing
  Assertion instance(const Run& run) const;
  std::string describe() const;
};

/// Deterministic sample of test templates over the run's communicated terms.
/// Every "A sent xi" for acting agents A is included first.
std::vector<TestAssertion> generate_tests(const Protocol& p, const Run& run, int depth, int count, std::uint64_t seed);

enum class TestResult : std::uint8_t { Agree, Differ, Inconclusive };

struct TestRecord {
  bool left = false, right = false;
  TestResult result = TestResult::Agree;
  /// Safe search over the witness closure disagrees with full search.
  bool closure_finding = false;
};

/// Evaluates every test on both sides. The OpenMP version and the serial
/// reference must produce identical records.
std::vector<TestRecord> run_battery(const Context& left, const Context& right, const Context* left_closure,
                                    const std::vector<Assertion>& lgoals, const std::vector<Assertion>& rgoals);
std::vector<TestRecord> run_battery_serial(const Context& left, const Context& right, const Context* left_closure,
                                           const std::vector<Assertion>& lgoals,
                                           const std::vector<Assertion>& rgoals);

struct IndistVerdict {
  bool indistinguishable = true;
  std::size_t tests_run = 0;
  std::size_t agreed = 0;
  std::size_t inconclusive = 0;
  std::size_t closure_findings = 0;
  std::optional<TestAssertion> distinguisher;
  Assertion left_instance, right_instance;
  bool left_derives = false;
};

IndistVerdict check_indistinguishable(const Run& run, const Run& swapped, const Knowledge& left,
                                      const Knowledge& right, const std::vector<TestAssertion>& tests,
                                      const SearchBudget& budget = {});

struct SafetyResult {
  bool safe = false;
  std::string detail;
};

/// Inspects the congruence classes of p, q, d, e over (X, Pi).
SafetyResult check_safety(const TermSet& X, const AssertionSet& pi, const SwapSpec& spec,
                          const SearchBudget& budget = {});

struct AnonymityConfig {
  std::vector<std::uint64_t> seeds;
  int tests = 500;
  int depth = 3;
  SearchBudget budget;
  bool require_anonymous = true;
};

struct SeedReport {
  std::uint64_t seed = 0;
  int voters = 0;
  bool run_valid = false;
  bool swapped_valid = false;
  bool swp_X = false;
  bool swp_phi = false;
  bool safety_left = false;
  bool safety_right = false;
  IndistVerdict tests;
  std::string failure;
  std::string trace, swapped_trace;
  double seconds = 0;
  bool pass() const;
};

struct AnonymityReport {
  std::string protocol;
  std::vector<SeedReport> seeds;
  double seconds = 0;
  bool all_pass() const;
  bool any_inconclusive() const;
};

/// The full per-seed pipeline: simulate with 2 + seed % 3 voters and the
/// authority and counter compromised, build the swapped run, check both
/// runs, state transport, safety and the test battery.
AnonymityReport check_anonymity_foo(const Protocol& p, const AnonymityConfig& cfg);
SeedReport check_anonymity_seed(const Protocol& p, const InitialSetup& setup, std::uint64_t seed,
                                const AnonymityConfig& cfg);

std::string format_report(const AnonymityReport& r);

}  // namespace dya
