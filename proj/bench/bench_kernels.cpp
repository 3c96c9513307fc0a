#include <random>

#include <benchmark/benchmark.h>

#include "catamp/lindblad.hpp"
#include "catamp/pulses.hpp"
#include "catamp/states.hpp"
#include "catamp/wigner.hpp"

using namespace catamp;

namespace {

struct Setup {
  DeviceParams params;
  Generator gen;
  CMatrix rho;
};

Setup make_setup(int nc) {
  DeviceParams p;
  p.cavity_dim = nc;
  p.kappa = units::khz(0.25);
  p.gamma_minus = 10.0 * p.kappa;
  p.gamma_phi = 10.0 * p.kappa;
  TimeDependentHamiltonian h(joint_dims(nc));
  h.add_static(static_hamiltonian(p, 0.0));
  const PulseSchedule s = table1_schedule(EdagRound::first, p);
  const auto tones = active_tones(s);
  const double wr = p.omega_r;
  h.add_term(embed_cavity(annihilation_op(nc)), [tones, wr](double t) { return drive_coefficient(tones, t, wr); });
  h.add_term(embed_cavity(creation_op(nc)),
             [tones, wr](double t) { return std::conj(drive_coefficient(tones, t, wr)); });

  std::mt19937 rng(11);
  std::normal_distribution<double> n(0.0, 1.0);
  const int d = 2 * nc;
  CMatrix g(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) g(i, j) = Complex(n(rng), n(rng));
  CMatrix rho = g * g.adjoint();
  rho /= rho.trace();
  return {p, Generator(h, collapse_operators(p, joint_dims(nc))), rho};
}

void BM_lindblad_fast(benchmark::State& st) {
  Setup s = make_setup(static_cast<int>(st.range(0)));
  s.gen.set_parallel(true);
  CMatrix out;
  for (auto _ : st) {
    s.gen.lindblad(1.0, s.rho, out);
    benchmark::DoNotOptimize(out.data());
  }
}

void BM_lindblad_serial(benchmark::State& st) {
  Setup s = make_setup(static_cast<int>(st.range(0)));
  s.gen.set_parallel(false);
  CMatrix out;
  for (auto _ : st) {
    s.gen.lindblad(1.0, s.rho, out);
    benchmark::DoNotOptimize(out.data());
  }
}

void BM_lindblad_reference(benchmark::State& st) {
  Setup s = make_setup(static_cast<int>(st.range(0)));
  CMatrix out;
  for (auto _ : st) {
    s.gen.lindblad_reference(1.0, s.rho, out);
    benchmark::DoNotOptimize(out.data());
  }
}

void BM_wigner_fast(benchmark::State& st) {
  const DensityOp rho = DensityOp::from_ket(cat_ket({Complex(1.5), Parity::even}, 20));
  GridSpec g{-3.0, 3.0, static_cast<int>(st.range(0)), -3.0, 3.0, static_cast<int>(st.range(0))};
  for (auto _ : st) benchmark::DoNotOptimize(wigner(rho, g).values.data());
}

void BM_wigner_reference(benchmark::State& st) {
  const DensityOp rho = DensityOp::from_ket(cat_ket({Complex(1.5), Parity::even}, 20));
  GridSpec g{-3.0, 3.0, static_cast<int>(st.range(0)), -3.0, 3.0, static_cast<int>(st.range(0))};
  for (auto _ : st) benchmark::DoNotOptimize(wigner_reference(rho, g).values.data());
}

}  // namespace

BENCHMARK(BM_lindblad_fast)->Arg(10)->Arg(20)->Arg(30);
BENCHMARK(BM_lindblad_serial)->Arg(10)->Arg(20)->Arg(30);
BENCHMARK(BM_lindblad_reference)->Arg(10)->Arg(20)->Arg(30);
BENCHMARK(BM_wigner_fast)->Arg(5)->Arg(11)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_wigner_reference)->Arg(5)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
