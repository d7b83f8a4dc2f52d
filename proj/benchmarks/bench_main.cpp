#include <benchmark/benchmark.h>

#include "toda/finite_gap.hpp"
#include "toda/lattice.hpp"
#include "toda/scattering.hpp"
#include "toda/surface.hpp"
#include "toda/theta.hpp"

using namespace toda;

namespace {

lattice::SteplikeLattice fig1(int half) {
  lattice::SteplikeLattice s(-half, half, lattice::Backgrounds{0.5, -4.0, 0.5, 0.0});
  s.set_b(0, -1.7);
  return s;
}

void BM_TodaRhs(benchmark::State& state) {
  auto s = fig1(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    auto r = lattice::toda_rhs(s);
    benchmark::DoNotOptimize(r.da.data());
  }
}
BENCHMARK(BM_TodaRhs)->Arg(128)->Arg(512);

void BM_EvolveUnitTime(benchmark::State& state) {
  auto s = fig1(static_cast<int>(state.range(0)));
  lattice::EvolveOptions opt;
  opt.dt = 0.005;
  for (auto _ : state) {
    auto t = lattice::evolve(s, 1.0, opt);
    benchmark::DoNotOptimize(t.snapshots.back().b(0));
  }
}
BENCHMARK(BM_EvolveUnitTime)->Arg(256)->Arg(512);

void BM_Wronskian(benchmark::State& state) {
  auto s = fig1(static_cast<int>(state.range(0)));
  const std::complex<double> z(-0.3, -1e-4);
  for (auto _ : state) {
    benchmark::DoNotOptimize(scattering::wronskian(z, s));
  }
}
BENCHMARK(BM_Wronskian)->Arg(256)->Arg(512);

void BM_ThetaReal(benchmark::State& state) {
  const double tau = 0.8;
  const int M = finitegap::theta_truncation(tau);
  double v = 0.123;
  for (auto _ : state) {
    v += 1e-6;
    benchmark::DoNotOptimize(finitegap::theta(v, tau, M));
  }
}
BENCHMARK(BM_ThetaReal);

void BM_GEval(benchmark::State& state) {
  surface::TwoBandSpectrum sp(0.5, -4.0);
  auto ctx = surface::SurfaceContext::build(sp);
  const std::complex<double> z(0.3, 0.4);
  for (auto _ : state) {
    benchmark::DoNotOptimize(surface::g_eval(z, 0.1, ctx));
  }
}
BENCHMARK(BM_GEval);

void BM_FiniteGapPoint(benchmark::State& state) {
  surface::TwoBandSpectrum sp(0.5, -4.0);
  auto ctx = surface::SurfaceContext::build(sp);
  auto params = finitegap::make_params(ctx, 0.7);
  long n = 0;
  for (auto _ : state) {
    ++n;
    benchmark::DoNotOptimize(finitegap::finite_gap_solution(n % 50, 37.0, params));
  }
}
BENCHMARK(BM_FiniteGapPoint);

}  // namespace

BENCHMARK_MAIN();
