#include "catamp/pulses.hpp"

#include <cmath>
#include <string>

#include "catamp/errors.hpp"
#include "catamp/units.hpp"

namespace catamp {

using units::ghz;
using units::mhz;

void GaussianTone::validate() const {
  if (!(width > 0.0)) throw InvalidArgument("tone width must be positive");
  if (amplitude < 0.0) throw InvalidArgument("tone amplitude must be non-negative");
}

void PulseSchedule::validate() const {
  if (!(t_end > t_start)) throw InvalidArgument("schedule window is empty");
  for (const auto& s : transfer_sets) {
    s.tone1.validate();
    s.tone2.validate();
    for (const GaussianTone* tone : {&s.tone1, &s.tone2}) {
      if (tone->center < t_start || tone->center > t_end) {
        throw InvalidArgument("envelope peak of manifold " + std::to_string(s.manifold) + " lies outside the window");
      }
    }
  }
}

const std::vector<TableRow>& table1_rows(EdagRound round) {
  static const std::vector<TableRow> first = {
      {0, 10.0, 5.949, 35.0, 5.749, 10.0},
      {2, 10.0, 5.949, 38.0, 5.603, 24.0},
      {4, 10.0, 5.949, 49.0, 5.501, 30.0},
      {6, 10.0, 5.949, 70.0, 5.419, 33.0},
  };
  static const std::vector<TableRow> second = {
      {1, 24.0, 5.953, 55.0, 5.679, 15.0},
      {3, 24.0, 5.953, 36.0, 5.551, 22.0},
      {5, 24.0, 5.953, 32.0, 5.462, 26.0},
      {7, 24.0, 5.953, 31.0, 5.385, 29.0},
  };
  return round == EdagRound::first ? first : second;
}

double table1_tau(EdagRound round) { return round == EdagRound::first ? 3.58 : 3.14; }

double envelope(const GaussianTone& tone, double t) {
  const double x = (t - tone.center) / tone.width;
  return tone.amplitude * std::exp(-x * x);
}

std::pair<double, double> tone_frequencies(int n, double delta_n, const DeviceParams& params) {
  const double w1 = transition_frequency(TransitionKind::minus_minus, n, params, 0.0) - delta_n;
  const double w2 = w1 - 2.0 * params.lambda * std::sqrt(n + 1.0);
  return {w1, w2};
}

double two_photon_residual(const TransferSet& set, const DeviceParams& params) {
  const double split = 2.0 * params.lambda * std::sqrt(set.manifold + 1.0);
  return std::abs((set.tone1.frequency - set.tone2.frequency) - split);
}

bool stirap_admissible(double tau, double width) { return tau > (std::sqrt(2.0) - 1.0) * width; }

PulseSchedule table1_schedule(EdagRound round, const DeviceParams& params, const ScheduleOptions& options) {
  const auto& rows = table1_rows(round);
  const double tau = table1_tau(round);
  const double width = kTable1Width;
  if (!stirap_admissible(tau, width)) throw InvalidArgument("tabulated offset violates tau > (sqrt2 - 1) T");
  const double c1 = options.reverse_order ? tau : -tau;
  const double c2 = -c1;

  PulseSchedule s;
  s.t_start = -0.5 * options.window;
  s.t_end = 0.5 * options.window;
  s.shared_tone1 = true;

  double shared_w1 = ghz(rows.front().omega1_ghz);
  if (options.frequencies == FrequencyMode::derived) {
    shared_w1 = tone_frequencies(rows.front().manifold, mhz(rows.front().delta_mhz), params).first;
  }
  for (const auto& r : rows) {
    TransferSet t;
    t.manifold = r.manifold;
    t.tone1 = {mhz(r.eps1_mhz), c1, width, shared_w1};
    if (options.frequencies == FrequencyMode::verbatim) {
      t.tone2 = {mhz(r.eps2_mhz), c2, width, ghz(r.omega2_ghz)};
      t.detuning = mhz(r.delta_mhz);
    } else {
      t.tone2 = {mhz(r.eps2_mhz), c2, width, shared_w1 - 2.0 * params.lambda * std::sqrt(r.manifold + 1.0)};
      t.detuning = transition_frequency(TransitionKind::minus_minus, r.manifold, params, 0.0) - shared_w1;
    }
    s.transfer_sets.push_back(t);
  }
  s.validate();
  return s;
}

PulseSchedule single_transfer_schedule(int n, double delta_n, double eps1, double eps2, double tau, double width,
                                       double window, const DeviceParams& params) {
  const auto [w1, w2] = tone_frequencies(n, delta_n, params);
  PulseSchedule s;
  const double half = std::max(0.5 * window, std::abs(tau));
  s.t_start = -half;
  s.t_end = half;
  s.shared_tone1 = false;
  TransferSet t;
  t.manifold = n;
  t.tone1 = {eps1, -tau, width, w1};
  t.tone2 = {eps2, tau, width, w2};
  t.detuning = delta_n;
  s.transfer_sets.push_back(t);
  s.validate();
  return s;
}

std::vector<GaussianTone> active_tones(const PulseSchedule& schedule) {
  std::vector<GaussianTone> tones;
  for (std::size_t i = 0; i < schedule.transfer_sets.size(); ++i) {
    const auto& s = schedule.transfer_sets[i];
    if (!schedule.shared_tone1 || i == 0) tones.push_back(s.tone1);
    tones.push_back(s.tone2);
  }
  return tones;
}

Complex drive_coefficient(const std::vector<GaussianTone>& tones, double t, double omega_r) {
  Complex f = 0.0;
  for (const auto& tone : tones) {
    const double eps = envelope(tone, t);
    if (eps == 0.0) continue;
    // Lab drive eps (e^{i w t} a + e^{-i w t} a^dagger) seen from the frame at omega_r.
    f += eps * std::polar(1.0, -(omega_r - tone.frequency) * t);
  }
  return f;
}

Complex drive_coefficient(const PulseSchedule& schedule, double t, double omega_r) {
  if (t < schedule.t_start || t > schedule.t_end) return 0.0;
  return drive_coefficient(active_tones(schedule), t, omega_r);
}

OpMatrix drive_hamiltonian(const PulseSchedule& schedule, double t, const DeviceParams& params) {
  const Complex f = drive_coefficient(schedule, t, params.omega_r);
  const OpMatrix a = annihilation_op(params.cavity_dim);
  const CMatrix h = f * a.matrix() + std::conj(f) * a.matrix().adjoint();
  return OpMatrix(embed_cavity(OpMatrix(h, a.dims())).matrix(), joint_dims(params.cavity_dim), true);
}

}  // namespace catamp
