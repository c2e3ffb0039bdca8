#include "dya/anonymity.hpp"

namespace dya {

namespace {

TestRecord evaluate(const Context& left, const Context& right, const Context* closure, const Assertion& lg,
                    const Assertion& rg) {
  TestRecord r;
  Verdict a, b;
  try {
    a = left.prove(lg);
    b = right.prove(rg);
  } catch (const std::exception&) {
    r.result = TestResult::Inconclusive;
    return r;
  }
  r.left = a.derivable;
  r.right = b.derivable;
  if (a.exhausted || b.exhausted)
    r.result = TestResult::Inconclusive;
  else
    r.result = a.derivable == b.derivable ? TestResult::Agree : TestResult::Differ;
  if (closure && !a.exhausted) {
    Verdict c = closure->prove(lg);
    r.closure_finding = !c.exhausted && c.derivable != a.derivable;
  }
  return r;
}

}  // namespace

std::vector<TestRecord> run_battery_serial(const Context& left, const Context& right, const Context* closure,
                                           const std::vector<Assertion>& lg, const std::vector<Assertion>& rg) {
  std::vector<TestRecord> out(lg.size());
  for (std::size_t i = 0; i < lg.size(); ++i) out[i] = evaluate(left, right, closure, lg[i], rg[i]);
  return out;
}

std::vector<TestRecord> run_battery(const Context& left, const Context& right, const Context* closure,
                                    const std::vector<Assertion>& lg, const std::vector<Assertion>& rg) {
  std::vector<TestRecord> out(lg.size());
  const long n = static_cast<long>(lg.size());
#pragma omp parallel for schedule(dynamic, 4)
  for (long i = 0; i < n; ++i)
    out[static_cast<std::size_t>(i)] =
        evaluate(left, right, closure, lg[static_cast<std::size_t>(i)], rg[static_cast<std::size_t>(i)]);
  return out;
}

}  // namespace dya
