#include <benchmark/benchmark.h>

#include "anonet/circuits.h"
#include "anonet/engine.h"
#include "anonet/oracle.h"
#include "anonet/protocols.h"
#include "anonet/verify.h"

namespace anonet {
namespace {

std::vector<int> alternating(NodeId n, int colors) {
  std::vector<int> in(n);
  for (NodeId i = 0; i < n; ++i) in[i] = static_cast<int>((i * 7 + i / 3) % colors);
  return in;
}

// Activations per second. The expectation never matches, so a run ends at
// max_steps or when the quiescence predicate fires.
void run_fixed_steps(benchmark::State& state, const ProtocolDef& p, const std::string& graph) {
  auto g = build_graph(graph, 1);
  auto in = alternating(g.node_count(), p.color_count);
  RunOptions o;
  o.limits.max_steps = 100'000;
  std::int64_t steps = 0;
  for (auto _ : state) {
    auto out = run(p, g, in, Expectation::ones(-1), o);
    steps += out.result.total_steps;
    benchmark::DoNotOptimize(out.result.final_outputs.data());
  }
  state.SetItemsProcessed(steps);
}

void BM_ParityCycle(benchmark::State& s) { run_fixed_steps(s, lsb_counter_protocol(2), "cycle:64"); }
void BM_ThresholdComplete(benchmark::State& s) {
  run_fixed_steps(s, threshold_protocol(3, 5, 3), "complete:64");
}
void BM_Plurality4(benchmark::State& s) { run_fixed_steps(s, plurality_protocol(4), "gnp:64:0.2"); }
BENCHMARK(BM_ParityCycle);
BENCHMARK(BM_ThresholdComplete);
BENCHMARK(BM_Plurality4);

void BM_SchedulerNext(benchmark::State& state) {
  auto g = build_graph("complete:128", 1);
  Scheduler sched;
  Rng rng(1);
  for (auto _ : state) benchmark::DoNotOptimize(sched.next(g, rng));
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_SchedulerNext);

void BM_VerifyPluralityComplete(benchmark::State& state) {
  auto p = plurality_protocol(3);
  auto g = build_graph("complete:" + std::to_string(state.range(0)), 1);
  std::vector<int> in(g.node_count(), 0);
  in[1] = 1;
  in[2] = 2;
  std::int64_t explored = 0;
  for (auto _ : state) {
    auto r = verify_exhaustive(p, g, in);
    explored += r.states_explored;
  }
  state.counters["configs"] = benchmark::Counter(static_cast<double>(explored),
                                                 benchmark::Counter::kIsRate);
}
BENCHMARK(BM_VerifyPluralityComplete)->Arg(4)->Arg(5)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace anonet

BENCHMARK_MAIN();
