#include <benchmark/benchmark.h>

#include "subrad/analysis.hpp"
#include "subrad/bands.hpp"
#include "subrad/field.hpp"
#include "subrad/hamiltonian.hpp"
#include "subrad/propagation.hpp"

namespace {

subrad::ModelParams chain(int atoms) {
  subrad::ModelParams p;
  p.atom_count = atoms;
  return p;
}

subrad::WavepacketState packet(const subrad::ModelParams& p) {
  subrad::GaussianSpec g;
  g.momentum_over_k0 = 1.5;
  g.psi_plus = 0.168;
  g.psi_minus = 0.168;
  return subrad::gaussian_initial(g, p);
}

void BM_BuildHamiltonian(benchmark::State& state) {
  const auto p = chain(static_cast<int>(state.range(0)));
  const auto field = subrad::field_at(subrad::FieldSchedule::fixed(p.zeeman_slope), p, 0.0);
  for (auto _ : state) benchmark::DoNotOptimize(subrad::build_hamiltonian(p, field));
}
BENCHMARK(BM_BuildHamiltonian)->Arg(51)->Arg(201);

void BM_Eigensolve(benchmark::State& state) {
  const auto p = chain(static_cast<int>(state.range(0)));
  const auto h = subrad::build_hamiltonian(p, subrad::field_at(subrad::FieldSchedule::fixed(p.zeeman_slope), p, 0.0));
  for (auto _ : state) benchmark::DoNotOptimize(subrad::SpectralDecomposition(h.matrix));
}
BENCHMARK(BM_Eigensolve)->Arg(51)->Arg(201)->Unit(benchmark::kMillisecond);

void BM_SpectralEvolve(benchmark::State& state) {
  const auto p = chain(201);
  const auto h = subrad::build_hamiltonian(p, subrad::field_at(subrad::FieldSchedule::fixed(p.zeeman_slope), p, 0.0));
  const subrad::SpectralDecomposition d(h.matrix);
  const auto modal = d.to_modal(packet(p).amplitudes);
  double t = 1.0;
  for (auto _ : state) benchmark::DoNotOptimize(d.evolve_modal(modal, t += 1.0));
}
BENCHMARK(BM_SpectralEvolve);

void BM_Rk4Steps(benchmark::State& state) {
  const auto p = chain(201);
  subrad::StepOptions options;
  options.dt_max = 1e-3;
  const subrad::Stepper stepper(p, subrad::FieldSchedule(p.zeeman_slope, {{0, 0}, {1, 5}}), options);
  const auto s = packet(p);
  for (auto _ : state) benchmark::DoNotOptimize(stepper.advance(s, 0.1));
  state.SetItemsProcessed(state.iterations() * 100);
}
BENCHMARK(BM_Rk4Steps)->Unit(benchmark::kMillisecond);

void BM_LatticeSum(benchmark::State& state) {
  subrad::ModelParams p;
  p.sum_cutoff = state.range(0);
  const subrad::LatticeSums sums(p);
  double k = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(sums(k));
    k = k > 4.9 ? 0.1 : k + 0.01;
  }
}
BENCHMARK(BM_LatticeSum)->Arg(5000)->Arg(50000);

void BM_MomentumSpectrum(benchmark::State& state) {
  const auto p = chain(201);
  const auto s = packet(p);
  for (auto _ : state) benchmark::DoNotOptimize(subrad::momentum_spectrum(s, p));
}
BENCHMARK(BM_MomentumSpectrum);

}  // namespace

BENCHMARK_MAIN();
