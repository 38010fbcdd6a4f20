#include <benchmark/benchmark.h>

#include "ftmp/barrier.hpp"
#include "ftmp/controller.hpp"
#include "ftmp/sim.hpp"
#include "ftmp/world.hpp"

using namespace ftmp;

namespace {

RealVec v2(double x, double y) { return RealVec{{x, y}}; }

void BM_EvaluateBarrier(benchmark::State& state) {
  const RealVec x = v2(1, 0.5), goal = v2(0, 0), nb = v2(4, 1);
  const BarrierParams bp;
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_barrier(x, goal, nb, bp));
}
BENCHMARK(BM_EvaluateBarrier);

void BM_ControlLaw(benchmark::State& state) {
  AgentState self = make_kinetic(0, v2(1, 0.5), v2(0, 0));
  AgentState nb = make_kinetic(1, v2(4, 1), v2(9, 9));
  nb.velocity = v2(0.3, -0.7);
  const BarrierParams bp;
  const ControlParams cp;
  for (auto _ : state) benchmark::DoNotOptimize(control_law(self, nb, bp, cp));
}
BENCHMARK(BM_ControlLaw);

void BM_NearestNeighbor(benchmark::State& state) {
  const Scenario s = preset("example2");
  const auto& agents = s.config.agents;
  for (auto _ : state) benchmark::DoNotOptimize(nearest_neighbor_index(agents.front(), agents));
}
BENCHMARK(BM_NearestNeighbor);

void BM_Step(benchmark::State& state) {
  const Scenario s = preset(state.range(0) == 4 ? "example1" : "example2");
  const auto& c = s.config;
  for (auto _ : state) benchmark::DoNotOptimize(step(c.agents, c.barrier, c.control, 1e-3));
}
BENCHMARK(BM_Step)->Arg(4)->Arg(20);

}  // namespace

BENCHMARK_MAIN();
