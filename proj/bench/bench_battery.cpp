#include <benchmark/benchmark.h>

#include "dya/anonymity.hpp"

using namespace dya;

namespace {

struct Fixture {
  Knowledge left, right;
  std::vector<Assertion> lgoals, rgoals;
};

const Fixture& fixture() {
  static const Fixture f = [] {
    const Protocol p = builtin_foo();
    const Run run = simulate(p, voting_setup(p, 3), 1);
    const SwapSpec spec = find_swap_spec(p, run);
    const Run swapped = build_swapped_run(run, spec);
    Fixture out;
    out.left = validate_run(p, run).final_state.intruder();
    out.right = validate_run(p, swapped).final_state.intruder();
    for (const TestAssertion& t : generate_tests(p, run, 3, 500, 1)) {
      out.lgoals.push_back(t.instance(run));
      out.rgoals.push_back(t.instance(swapped));
    }
    return out;
  }();
  return f;
}

template <bool Parallel>
void BM_Battery(benchmark::State& state) {
  const Fixture& f = fixture();
  const Context L(f.left.X, f.left.phi, Mode::Full);
  const Context R(f.right.X, f.right.phi, Mode::Full);
  for (auto _ : state) {
    auto recs = Parallel ? run_battery(L, R, nullptr, f.lgoals, f.rgoals)
                         : run_battery_serial(L, R, nullptr, f.lgoals, f.rgoals);
    benchmark::DoNotOptimize(recs);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(f.lgoals.size()));
}

}  // namespace

BENCHMARK(BM_Battery<false>)->Name("battery/serial")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Battery<true>)->Name("battery/openmp")->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
