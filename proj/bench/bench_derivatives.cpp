// Serial reference kernel against the OpenMP kernel, plus one full RK4 step.
#include <benchmark/benchmark.h>

#include <random>

#include "rungscope/cluster_dynamics.hpp"
#include "rungscope/params.hpp"

namespace {

using namespace rungscope;

struct Fixture {
  DynamicsModel model;
  CorrelationState state;
};

Fixture make_fixture(int modes) {
  const auto params = load_scenario("disk");
  const auto grid = build_mode_grid(params.gamma_cav, 2.75 * params.g, modes);
  const auto couplings = coupling_constants(grid, params.g);
  Fixture fx{make_model(params, grid, couplings), CorrelationState::zeros(modes)};
  std::mt19937_64 rng(7);
  std::normal_distribution<double> normal(0.0, 1e-3);
  auto c = [&] { return cplx(normal(rng), normal(rng)); };
  for (int q = 0; q < modes; ++q) {
    fx.state.beta[q] = c();
    fx.state.Pi[q] = c();
    fx.state.Theta[q] = c();
    fx.state.Phi[q] = c();
    for (int k = 0; k < modes; ++k) {
      fx.state.s(q, k) = c();
      fx.state.n(q, k) = c();
    }
  }
  fx.state.P = c();
  fx.state.f_e = fx.state.f_h = 1e-3;
  enforce_symmetry(fx.state);
  return fx;
}

void BM_DerivativesReference(benchmark::State& st) {
  auto fx = make_fixture(static_cast<int>(st.range(0)));
  for (auto _ : st) {
    auto rate = derivatives_reference(fx.state, fx.model);
    benchmark::DoNotOptimize(rate.s.data());
  }
  st.SetComplexityN(st.range(0));
}

void BM_DerivativesParallel(benchmark::State& st) {
  auto fx = make_fixture(static_cast<int>(st.range(0)));
  CorrelationState rate;
  for (auto _ : st) {
    derivatives(fx.state, fx.model, rate);
    benchmark::DoNotOptimize(rate.s.data());
  }
  st.SetComplexityN(st.range(0));
}

void BM_Rk4Step(benchmark::State& st) {
  auto fx = make_fixture(static_cast<int>(st.range(0)));
  Rk4Stepper stepper;
  for (auto _ : st) {
    stepper.step(fx.state, 1e-4, fx.model);
    benchmark::DoNotOptimize(fx.state.s.data());
  }
}

}  // namespace

BENCHMARK(BM_DerivativesReference)->Arg(65)->Arg(137)->Arg(281)->Complexity();
BENCHMARK(BM_DerivativesParallel)->Arg(65)->Arg(137)->Arg(281)->Complexity();
BENCHMARK(BM_Rk4Step)->Arg(137);

BENCHMARK_MAIN();
