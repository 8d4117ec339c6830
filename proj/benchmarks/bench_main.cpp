#include <cmath>
#include <numbers>
#include <vector>

#include <benchmark/benchmark.h>

#include <lavrentiev/experiments.hpp>

using namespace lavrentiev;

namespace {

std::vector<double> decreasing_alphas(int count) {
  std::vector<double> a;
  for (int k = 0; k < count; ++k) a.push_back(std::pow(0.5, k));
  return a;
}

// Sequential discrepancy-style path on the elliptic model, warm starts vs.
// each alpha solved from xbar.
void BM_AlphaPathWarm(benchmark::State& state) {
  ProblemSpec spec;
  spec.kind = ProblemKind::elliptic;
  spec.n = static_cast<int>(state.range(0));
  const SyntheticProblem p = make_problem(spec);
  const std::vector<double> alphas = decreasing_alphas(20);
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_alpha_path(*p.forward, p.xbar, p.y, alphas, {}));
  }
}
BENCHMARK(BM_AlphaPathWarm)->Arg(200)->Arg(2000)->Unit(benchmark::kMillisecond);

void BM_AlphaPathCold(benchmark::State& state) {
  ProblemSpec spec;
  spec.kind = ProblemKind::elliptic;
  spec.n = static_cast<int>(state.range(0));
  const SyntheticProblem p = make_problem(spec);
  const std::vector<double> alphas = decreasing_alphas(20);
  for (auto _ : state) {
    for (double a : alphas) {
      LavrentievConfig cfg;
      cfg.alpha = a;
      benchmark::DoNotOptimize(solve_nonlinear(*p.forward, p.xbar, p.y, cfg));
    }
  }
}
BENCHMARK(BM_AlphaPathCold)->Arg(200)->Arg(2000)->Unit(benchmark::kMillisecond);

void BM_FractionalPower(benchmark::State& state) {
  const Grid g(static_cast<int>(state.range(0)));
  auto a = volterra(g);
  const DiscreteFunction v = DiscreteFunction::sample(g, [](double t) { return std::cos(std::numbers::pi * t); });
  DunfordSpec spec;
  spec.p = 0.25;
  for (auto _ : state) benchmark::DoNotOptimize(fractional_power_apply(*a, spec, v));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_FractionalPower)->RangeMultiplier(10)->Range(1000, 100000)->Unit(benchmark::kMillisecond)->Complexity();

void BM_NormalShiftedSolve(benchmark::State& state) {
  const Grid g(static_cast<int>(state.range(0)));
  auto a = volterra(g);
  const Vector b = Vector::Ones(g.size());
  for (auto _ : state) benchmark::DoNotOptimize(a->normal_shifted_solve(1e-10, b));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_NormalShiftedSolve)->RangeMultiplier(4)->Range(1 << 12, 1 << 22)->Unit(benchmark::kMicrosecond)->Complexity();

void BM_DistanceProfile(benchmark::State& state) {
  const Grid g(static_cast<int>(state.range(0)));
  auto a = volterra(g);
  const DiscreteFunction e = DiscreteFunction::constant(g, 1.0);
  const std::vector<double> radii{1.0, 3.0, 10.0, 30.0, 100.0};
  for (auto _ : state) benchmark::DoNotOptimize(distance_function(*a, e, radii));
}
BENCHMARK(BM_DistanceProfile)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
