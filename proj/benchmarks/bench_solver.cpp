#include <cmath>

#include <benchmark/benchmark.h>

#include "rothevi/rothevi.hpp"

namespace {

using namespace rothevi;

Problem obstacle_line(int nodes) {
  ProblemSpec spec;
  spec.resolution = nodes;
  spec.convection = {1.0};
  return build(spec);
}

// One stationary obstacle solve with a frozen velocity, cold start.
void BM_StationaryObstacle(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Problem p = obstacle_line(n);
  Vector w(n), rhs(n);
  for (int i = 0; i < n; ++i) {
    const double x = (i + 1.0) / (n + 1.0);
    w[i] = std::max(0.0, std::sin(2.0 * M_PI * x));
    rhs[i] = -8.0 * std::sin(M_PI * x) + 40.0 * w[i];
  }
  const OseenData data{p.gelfand, p.phi, p.convection, 40.0, w, rhs};
  for (auto _ : state) {
    StationarySolve s = solve_stationary_vi(data);
    benchmark::DoNotOptimize(s.u.data());
  }
  state.SetComplexityN(n);
}
BENCHMARK(BM_StationaryObstacle)->RangeMultiplier(2)->Range(16, 256)->Complexity();

// Ten warm-started scheme steps on the 2D obstacle grid.
void BM_RotheSteps2d(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  ProblemSpec spec;
  spec.kind = ProblemKind::kObstacleCd2d;
  spec.resolution = m;
  spec.convection = {0.5, 0.25};
  const Problem p = build(spec);
  const DenseMatrix xy = node_coordinates(spec);
  RotheConfig c;
  c.dt = 0.01;
  c.T = 0.1;
  c.u0 = Vector(p.dim());
  for (int i = 0; i < p.dim(); ++i) {
    c.u0[i] = 0.1 * std::sin(M_PI * xy(i, 0)) * std::sin(M_PI * xy(i, 1));
  }
  c.load = Load::constant(Vector::Constant(p.dim(), -0.5));
  for (auto _ : state) {
    Trajectory t = rothe_steps(p, c, 10);
    benchmark::DoNotOptimize(t.states.back().data());
  }
}
BENCHMARK(BM_RotheSteps2d)->Arg(8)->Arg(16)->Arg(32);

}  // namespace

BENCHMARK_MAIN();
