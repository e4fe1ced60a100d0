#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>

#include "visco/solver.hpp"
#include "visco/wellposedness.hpp"

using namespace visco;

namespace {

Matrix sample_q(int n) {
  Matrix q(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) q(i, j) = 0.3 * std::sin(1.0 + i + 2.0 * j);
  return q;
}

void BM_RankOneMin(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto m = viscous_tangent_q(ViscosityModel::z0_prime(), random_deformation_gradient(n, 7), sample_q(n));
  const int res = n == 2 ? 360 : 90;
  for (auto _ : state) benchmark::DoNotOptimize(rank_one_min(m, res, 40));
}
BENCHMARK(BM_RankOneMin)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_ViscousTangent(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Matrix f = random_deformation_gradient(n, 11);
  const Matrix q = sample_q(n);
  for (auto _ : state) benchmark::DoNotOptimize(viscous_tangent_q(ViscosityModel::zm(2), f, q));
}
BENCHMARK(BM_ViscousTangent)->Arg(2)->Arg(3);

void BM_SemiImplicitStep(benchmark::State& state) {
  const int cells = static_cast<int>(state.range(0));
  const Grid g = Grid::build(2, cells);
  const FieldState s = init_state(
      g, [](const Vector& x) { return x; },
      [](const Vector& x) {
        const double b = 0.1 * std::sin(std::numbers::pi * x[0]) * std::sin(std::numbers::pi * x[1]);
        return Vector{b, b};
      },
      1e-3);
  SolverConfig cfg = SolverConfig::defaults_for(2);
  cfg.dt = 1e-3;
  const ConstitutiveModel model{EnergyModel::w0(), ViscosityModel::z0_double_prime()};
  for (auto _ : state) benchmark::DoNotOptimize(semi_implicit_step(s, model, g, cfg));
}
BENCHMARK(BM_SemiImplicitStep)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
