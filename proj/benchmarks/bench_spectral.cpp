// Micro benchmarks of the transform, nonlinear-term and stepping kernels on
// the desk-scale grid and a few neighbours.

#include <benchmark/benchmark.h>

#include "zkb/domain.hpp"
#include "zkb/harness/initial_data.hpp"
#include "zkb/nonlinear.hpp"

namespace {

zkb::DomainConfig domain(const benchmark::State& state) {
  return zkb::plan_domain(3.14159265358979323846, 16.0 * 3.14159265358979323846, static_cast<int>(state.range(0)),
                          static_cast<int>(state.range(1)), 0.5);
}

zkb::SpectralField sample(const zkb::DomainConfig& d) {
  zkb::harness::InitialDataSpec spec;
  spec.kind = zkb::harness::InitKind::random_band;
  spec.jmax = d.nx() / 4;
  spec.lmax = d.ny() / 2;
  return zkb::harness::make_initial_spectrum(spec, d);
}

void BM_ToGrid(benchmark::State& state) {
  const auto d = domain(state);
  const auto s = sample(d);
  zkb::GridField g(d);
  for (auto _ : state) {
    zkb::detail::inverse_real(s, d, g);
    benchmark::DoNotOptimize(g.values().data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(d.size()));
}

void BM_ToSpectral(benchmark::State& state) {
  const auto d = domain(state);
  const auto g = zkb::to_grid(sample(d), d);
  zkb::SpectralField s(d);
  for (auto _ : state) {
    zkb::detail::forward_real(g, d, s);
    benchmark::DoNotOptimize(s.coeffs().data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(d.size()));
}

void BM_DerivativeY(benchmark::State& state) {
  const auto d = domain(state);
  const auto s = sample(d);
  for (auto _ : state) benchmark::DoNotOptimize(zkb::derivative(s, zkb::Axis::y, 1, d));
}

void BM_NonlinearTerm(benchmark::State& state) {
  const auto d = domain(state);
  const auto s = sample(d);
  const zkb::StepperConfig cfg;
  const auto flux = zkb::RegularizedFlux::unregularized();
  for (auto _ : state) benchmark::DoNotOptimize(zkb::nonlinear_term(s, flux, cfg, d));
}

void BM_Etd2Step(benchmark::State& state) {
  const auto d = domain(state);
  const auto s = sample(d);
  const zkb::StepperConfig cfg;
  const zkb::Etd2Stepper stepper(d, cfg, zkb::RegularizedFlux::unregularized());
  for (auto _ : state) benchmark::DoNotOptimize(stepper.step(s));
}

void BM_Measure(benchmark::State& state) {
  const auto d = domain(state);
  const auto s = sample(d);
  const auto flux = zkb::RegularizedFlux::unregularized();
  const auto level = state.range(2) ? zkb::DiagnosticsLevel::full : zkb::DiagnosticsLevel::basic;
  for (auto _ : state) benchmark::DoNotOptimize(zkb::measure(s, flux, level, d, 0.0));
}

}  // namespace

BENCHMARK(BM_ToGrid)->Args({128, 32})->Args({256, 64})->Args({512, 128});
BENCHMARK(BM_ToSpectral)->Args({128, 32})->Args({256, 64})->Args({512, 128});
BENCHMARK(BM_DerivativeY)->Args({256, 64});
BENCHMARK(BM_NonlinearTerm)->Args({256, 64});
BENCHMARK(BM_Etd2Step)->Args({256, 64});
BENCHMARK(BM_Measure)->Args({256, 64, 0})->Args({256, 64, 1});

BENCHMARK_MAIN();
