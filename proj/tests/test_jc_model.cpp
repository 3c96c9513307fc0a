#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "catamp/errors.hpp"
#include "catamp/jc_model.hpp"
#include "catamp/lindblad.hpp"
#include "catamp/states.hpp"

using namespace catamp;
using std::numbers::pi;

namespace {

// 2x2 block of H on span{|e,n>, |g,n+1>}.
Eigen::Matrix2d manifold_block(int n, double delta, double lambda) {
  const double g = lambda * std::sqrt(n + 1.0);
  Eigen::Matrix2d b;
  b << 0.5 * delta, g, g, -0.5 * delta;
  return b;
}

}  // namespace

TEST_CASE("static Hamiltonian coupling and spectrum") {
  DeviceParams p;
  p.cavity_dim = 8;
  const CMatrix h = static_hamiltonian(p, 0.0).matrix();
  const int nc = p.cavity_dim;
  CHECK(h(joint_index(nc, 0, 1), joint_index(nc, 1, 0)).real() == doctest::Approx(p.lambda));
  CHECK((h - h.adjoint()).cwiseAbs().maxCoeff() < 1e-12);

  for (int n = 0; n + 1 < nc; ++n) {
    CAPTURE(n);
    Eigen::Matrix2cd blk;
    const int ie = joint_index(nc, 1, n), ig = joint_index(nc, 0, n + 1);
    blk << h(ie, ie), h(ie, ig), h(ig, ie), h(ig, ig);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(blk);
    CHECK(es.eigenvalues()[1] == doctest::Approx(p.lambda * std::sqrt(n + 1.0)).epsilon(1e-12));
    CHECK(es.eigenvalues()[0] == doctest::Approx(-p.lambda * std::sqrt(n + 1.0)).epsilon(1e-12));
  }
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es3(manifold_block(3, 0.0, p.lambda));
  const double split = es3.eigenvalues()[1] - es3.eigenvalues()[0];
  CHECK(split == doctest::Approx(4.0 * p.lambda).epsilon(1e-12));
  CHECK(split == doctest::Approx(units::ghz(0.4)).epsilon(1e-12));
}

TEST_CASE("mixing angle") {
  const double lam = units::ghz(0.1);
  CHECK(mixing_angle(0, 0.0, lam) == doctest::Approx(pi / 4));
  CHECK(mixing_angle(2, 1e9 * lam, lam) < 1e-8);
  CHECK(mixing_angle(2, 1e9 * lam, lam) > 0.0);
  CHECK(mixing_angle(2, -1e9 * lam, lam) == doctest::Approx(pi / 2).epsilon(1e-8));
  CHECK(mixing_angle(2, -1e9 * lam, lam) < pi / 2);
  double prev = pi;
  for (double d = -50.0; d <= 50.0; d += 0.5) {
    const double th = mixing_angle(1, d * lam, lam);
    CHECK(th < prev);
    prev = th;
  }
}

TEST_CASE("dressed pairs") {
  const double lam = units::ghz(0.1);
  const int nc = 10;
  SUBCASE("resonance gives equal weights") {
    const DressedPair dp = dressed_pair(2, 0.0, lam, nc);
    CHECK(std::norm(dp.plus[joint_index(nc, 1, 2)]) == doctest::Approx(0.5));
    CHECK(std::norm(dp.plus[joint_index(nc, 0, 3)]) == doctest::Approx(0.5));
    CHECK(dp.theta == doctest::Approx(pi / 4));
  }
  SUBCASE("far detuned plus state is mostly excited") {
    const DressedPair dp = dressed_pair(0, 20.0 * lam, lam, nc);
    const double c = std::cos(0.5 * std::atan2(2.0 * lam, 20.0 * lam));
    CHECK(std::norm(dp.plus[joint_index(nc, 1, 0)]) > 0.997);
    CHECK(std::norm(dp.plus[joint_index(nc, 1, 0)]) == doctest::Approx(c * c).epsilon(1e-12));
  }
  SUBCASE("eigen-residual, orthogonality and energies at general detuning") {
    DeviceParams p;
    p.cavity_dim = nc;
    for (double d : {-3.0, -0.4, 0.0, 0.7, 5.0}) {
      const double delta = d * lam;
      const OpMatrix h = static_hamiltonian(p, delta);
      for (int n = 0; n + 1 < nc; ++n) {
        CAPTURE(d);
        CAPTURE(n);
        const DressedPair dp = dressed_pair(n, delta, lam, nc);
        const CVector rp = h.matrix() * dp.plus.amplitudes() - dp.energy_plus * dp.plus.amplitudes();
        const CVector rm = h.matrix() * dp.minus.amplitudes() - dp.energy_minus * dp.minus.amplitudes();
        CHECK(rp.norm() < 1e-10 * lam);
        CHECK(rm.norm() < 1e-10 * lam);
        CHECK(std::abs(dp.plus.amplitudes().dot(dp.minus.amplitudes())) < 1e-15);
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(manifold_block(n, delta, lam));
        const double closed = 0.5 * std::sqrt(delta * delta + 4.0 * lam * lam * (n + 1));
        CHECK(dp.energy_plus == doctest::Approx(es.eigenvalues()[1]).epsilon(1e-12));
        CHECK(dp.energy_minus == doctest::Approx(es.eigenvalues()[0]).epsilon(1e-12));
        CHECK(dp.energy_plus == doctest::Approx(closed).epsilon(1e-12));
        CHECK(dressed_energy_plus(n, delta, lam) == doctest::Approx(closed).epsilon(1e-12));
        CHECK(dressed_energy_minus(n, delta, lam) == doctest::Approx(-closed).epsilon(1e-12));
      }
    }
  }
  CHECK_THROWS_AS(dressed_pair(9, 0.0, lam, nc), TruncationError);
}

TEST_CASE("transition frequencies") {
  const DeviceParams p;
  const double s2 = std::sqrt(2.0);
  const double mm = transition_frequency(TransitionKind::minus_minus, 0, p, 0.0);
  const double pm = transition_frequency(TransitionKind::plus_minus, 0, p, 0.0);
  CHECK(mm == doctest::Approx(p.omega_r - p.lambda * (s2 - 1.0)).epsilon(1e-14));
  CHECK(units::to_ghz(mm) == doctest::Approx(5.95858).epsilon(1e-6));
  CHECK(units::to_ghz(mm - units::mhz(10.0)) == doctest::Approx(5.949).epsilon(1e-4));
  CHECK(pm == doctest::Approx(p.omega_r - p.lambda * (s2 + 1.0)).epsilon(1e-14));
  CHECK(units::to_ghz(pm) == doctest::Approx(5.75858).epsilon(1e-6));
  CHECK(units::to_ghz(pm - units::mhz(10.0)) == doctest::Approx(5.749).epsilon(1e-4));
  for (int n = 0; n < 8; ++n) {
    const double diff = transition_frequency(TransitionKind::minus_minus, n, p, 0.0) -
                        transition_frequency(TransitionKind::plus_minus, n, p, 0.0);
    CHECK(diff == doctest::Approx(2.0 * p.lambda * std::sqrt(n + 1.0)).epsilon(1e-12));
  }
}

TEST_CASE("sweep schedule") {
  SweepSchedule s;
  CHECK(sweep_delta(s, 0.0) == s.delta_start);
  CHECK(sweep_delta(s, s.duration) == s.delta_end);
  CHECK(sweep_delta(s, 0.5 * s.duration) == doctest::Approx(0.5 * (s.delta_start + s.delta_end)));
  s.profile = SweepProfile::smoothstep;
  CHECK(sweep_delta(s, 0.0) == s.delta_start);
  CHECK(sweep_delta(s, s.duration) == s.delta_end);
  CHECK(sweep_delta(s, 0.5 * s.duration) == doctest::Approx(0.5 * (s.delta_start + s.delta_end)));
  CHECK_THROWS_AS(sweep_delta(s, -0.1), InvalidArgument);
  CHECK_THROWS_AS(sweep_delta(s, s.duration + 0.1), InvalidArgument);
  s.duration = 0.0;
  CHECK_THROWS_AS(s.validate(), InvalidArgument);
}

TEST_CASE("device parameters validate") {
  DeviceParams p;
  CHECK_NOTHROW(p.validate());
  p.kappa = -1.0;
  CHECK_THROWS_AS(p.validate(), InvalidArgument);
  p.kappa = 0.0;
  p.lambda = 0.0;
  CHECK_THROWS_AS(p.validate(), InvalidArgument);
}

// Adiabatic following conserves the overlap with the instantaneous dressed
// state, so a bare |e,n> start can reach |+,n> only up to cos^2 theta_n(delta_start).
TEST_CASE("adiabatic sweep follows the plus dressed state") {
  DeviceParams p;
  p.cavity_dim = 10;
  const SweepSchedule sweep;
  const int nc = p.cavity_dim;
  TimeDependentHamiltonian h(joint_dims(nc));
  h.add_static(static_hamiltonian(p, 0.0));
  h.add_term(Complex(0.5) * embed_qubit(sigma_z(), nc), [sweep](double t) {
    return Complex(sweep_delta(sweep, std::clamp(t, 0.0, sweep.duration)));
  });
  for (int n = 0; n <= 8; ++n) {
    CAPTURE(n);
    const DressedPair end = dressed_pair(n, 0.0, p.lambda, nc);
    const DressedPair begin = dressed_pair(n, sweep.delta_start, p.lambda, nc);
    const auto dressed = evolve_pure(begin.plus, h, p, {0.0, sweep.duration});
    CHECK(fidelity(dressed.final_state(), end.plus) > 0.999);

    const FockKet bare = FockKet::basis(joint_dims(nc), joint_index(nc, 1, n));
    const auto traj = evolve_pure(bare, h, p, {0.0, sweep.duration});
    const double c = std::cos(mixing_angle(n, sweep.delta_start, p.lambda));
    CHECK(fidelity(traj.final_state(), end.plus) == doctest::Approx(c * c).epsilon(1e-3));
  }
}
