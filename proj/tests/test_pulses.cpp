#include "doctest.h"

#include <cmath>
#include <random>

#include "catamp/errors.hpp"
#include "catamp/pulses.hpp"

using namespace catamp;
using units::ghz;
using units::mhz;

TEST_CASE("Gaussian envelope") {
  const GaussianTone t{mhz(35.0), 3.58, 6.28, ghz(5.749)};
  CHECK(envelope(t, t.center) == t.amplitude);
  CHECK(envelope(t, t.center + t.width) == doctest::Approx(t.amplitude / std::exp(1.0)));
  CHECK(envelope(t, t.center - t.width) == doctest::Approx(t.amplitude / std::exp(1.0)));
  CHECK(envelope(t, t.center + 5.0 * t.width) < 2e-11 * t.amplitude);
  GaussianTone bad = t;
  bad.width = 0.0;
  CHECK_THROWS_AS(bad.validate(), InvalidArgument);
  bad = t;
  bad.amplitude = -1.0;
  CHECK_THROWS_AS(bad.validate(), InvalidArgument);
}

TEST_CASE("tone frequencies from the dressed spectrum") {
  const DeviceParams p;
  const auto [w1, w2] = tone_frequencies(0, mhz(10.0), p);
  CHECK(units::to_ghz(w1) == doctest::Approx(5.9486).epsilon(2e-5));
  CHECK(units::to_ghz(w2) == doctest::Approx(5.7486).epsilon(2e-5));
  CHECK(std::abs(units::to_ghz(w1) - 5.949) < 1e-3);
  CHECK(std::abs(units::to_ghz(w2) - 5.749) < 1e-3);
  const auto [u1, u2] = tone_frequencies(2, mhz(24.0), p);
  CHECK(std::abs(units::to_ghz(u2) - 5.603) < 1e-3);
  (void)u1;
  for (int n = 0; n < 8; ++n) {
    const auto [a, b] = tone_frequencies(n, mhz(3.0 * n), p);
    CHECK(a - b == doctest::Approx(2.0 * p.lambda * std::sqrt(n + 1.0)).epsilon(1e-14));
  }
}

TEST_CASE("tabulated schedules") {
  const DeviceParams p;
  const PulseSchedule first = table1_schedule(EdagRound::first, p);
  const PulseSchedule second = table1_schedule(EdagRound::second, p);
  REQUIRE(first.transfer_sets.size() == 4);
  REQUIRE(second.transfer_sets.size() == 4);
  CHECK(first.duration() == doctest::Approx(25.0));

  const TransferSet& s6 = first.transfer_sets[3];
  CHECK(s6.manifold == 6);
  CHECK(units::to_mhz(s6.tone2.amplitude) == doctest::Approx(70.0));
  CHECK(units::to_ghz(s6.tone2.frequency) == doctest::Approx(5.419));
  CHECK(units::to_mhz(s6.detuning) == doctest::Approx(33.0));

  const TransferSet& s7 = second.transfer_sets[3];
  CHECK(s7.manifold == 7);
  CHECK(units::to_ghz(s7.tone2.frequency) == doctest::Approx(5.385));
  CHECK(units::to_mhz(s7.detuning) == doctest::Approx(29.0));

  const double eps2_first[] = {35, 38, 49, 70};
  const double eps2_second[] = {55, 36, 32, 31};
  for (int i = 0; i < 4; ++i) {
    const auto& a = first.transfer_sets[i];
    const auto& b = second.transfer_sets[i];
    CHECK(a.manifold == 2 * i);
    CHECK(b.manifold == 2 * i + 1);
    CHECK(units::to_mhz(a.tone1.amplitude) == doctest::Approx(10.0));
    CHECK(units::to_mhz(b.tone1.amplitude) == doctest::Approx(24.0));
    CHECK(units::to_ghz(a.tone1.frequency) == doctest::Approx(5.949));
    CHECK(units::to_ghz(b.tone1.frequency) == doctest::Approx(5.953));
    CHECK(units::to_mhz(a.tone2.amplitude) == doctest::Approx(eps2_first[i]));
    CHECK(units::to_mhz(b.tone2.amplitude) == doctest::Approx(eps2_second[i]));
    CHECK(a.tone1.width == doctest::Approx(6.28));
    // tone1 first
    CHECK(a.tone1.center == doctest::Approx(-3.58));
    CHECK(a.tone2.center == doctest::Approx(3.58));
    CHECK(b.tone1.center == doctest::Approx(-3.14));
    CHECK(b.tone2.center == doctest::Approx(3.14));
    CHECK(a.tone2.amplitude * a.tone2.width >= 10.0);
    CHECK(b.tone2.amplitude * b.tone2.width >= 10.0);
  }
  CHECK(mhz(35.0) * 6.28 == doctest::Approx(1381.0).epsilon(1e-3));
  CHECK(stirap_admissible(table1_tau(EdagRound::first), kTable1Width));
  CHECK(stirap_admissible(table1_tau(EdagRound::second), kTable1Width));
  CHECK_FALSE(stirap_admissible(2.5, kTable1Width));

  const PulseSchedule rev = table1_schedule(EdagRound::first, p, {.reverse_order = true});
  CHECK(rev.transfer_sets[0].tone1.center == doctest::Approx(3.58));
}

TEST_CASE("shared first tone is driven once") {
  const DeviceParams p;
  const PulseSchedule s = table1_schedule(EdagRound::first, p);
  const auto tones = active_tones(s);
  CHECK(tones.size() == 5);
  int at_w1 = 0;
  for (const auto& t : tones)
    if (t.frequency == s.transfer_sets[0].tone1.frequency) ++at_w1;
  CHECK(at_w1 == 1);
}

TEST_CASE("two-photon residuals of the table") {
  const DeviceParams p;
  for (EdagRound r : {EdagRound::first, EdagRound::second}) {
    for (const auto& set : table1_schedule(r, p).transfer_sets) {
      const double res = units::to_mhz(two_photon_residual(set, p));
      CAPTURE(set.manifold);
      const double f1 = units::to_mhz(set.tone1.frequency), f2 = units::to_mhz(set.tone2.frequency);
      const double oracle = std::abs((f1 - f2) - 200.0 * std::sqrt(set.manifold + 1.0));
      CHECK(std::abs(res - oracle) < 1e-6);
      if (set.manifold == 1) CHECK(res > 5.0);  // the flagged row
    }
    for (const auto& set : table1_schedule(r, p, {.frequencies = FrequencyMode::derived}).transfer_sets) {
      CHECK(two_photon_residual(set, p) < 1e-9);
    }
  }
}

TEST_CASE("drive Hamiltonian") {
  DeviceParams p;
  p.cavity_dim = 6;
  const PulseSchedule s = table1_schedule(EdagRound::first, p);
  double max_eps = 0.0;
  for (const auto& t : active_tones(s)) max_eps = std::max(max_eps, t.amplitude);

  const OpMatrix before = drive_hamiltonian(s, s.t_start - 1.0, p);
  CHECK(before.matrix().cwiseAbs().maxCoeff() <= 1e-12 * max_eps);

  PulseSchedule one;
  one.shared_tone1 = false;
  TransferSet t;
  t.tone1 = {mhz(10.0), 0.0, 6.28, ghz(5.9)};
  t.tone2 = {0.0, 0.0, 6.28, ghz(5.7)};
  one.transfer_sets.push_back(t);
  const CMatrix h0 = drive_hamiltonian(one, 0.0, p).matrix();
  const CMatrix a = embed_cavity(annihilation_op(p.cavity_dim)).matrix();
  CHECK((h0 - mhz(10.0) * (a + a.adjoint())).cwiseAbs().maxCoeff() < 1e-12);

  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(s.t_start, s.t_end);
  for (int i = 0; i < 20; ++i) {
    const CMatrix h = drive_hamiltonian(s, u(rng), p).matrix();
    CHECK((h - h.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("single transfer schedule") {
  const DeviceParams p;
  const PulseSchedule s = single_transfer_schedule(0, mhz(10.0), mhz(10.0), mhz(35.0), 3.58, 6.28, 25.0, p);
  REQUIRE(s.transfer_sets.size() == 1);
  CHECK(s.transfer_sets[0].tone1.center == doctest::Approx(-3.58));
  CHECK(two_photon_residual(s.transfer_sets[0], p) < 1e-9);
  CHECK(active_tones(s).size() == 2);
}
