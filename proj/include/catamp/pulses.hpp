#pragma once

// Gaussian bichromatic drive schedules for the dressed-state transfers
// |+,n> -> |-,n> via |-,n+1>.
//
// A schedule lives on its own clock with the sequence midpoint at t = 0 and
// a window [t_start, t_end]. Envelopes and carrier phases both use this clock.

#include <utility>
#include <vector>

#include "catamp/hilbert.hpp"
#include "catamp/jc_model.hpp"

namespace catamp {

struct GaussianTone {
  double amplitude = 0.0;  // |epsilon|, rad/us
  double center = 0.0;     // us, relative to the sequence midpoint
  double width = 1.0;      // T, 1/e half-width in us
  double frequency = 0.0;  // lab-frame angular frequency

  void validate() const;
};

// Drive pair for manifold n: tone1 on |-,n> <-> |-,n+1>, tone2 on |+,n> <-> |-,n+1>.
struct TransferSet {
  int manifold = 0;
  GaussianTone tone1;
  GaussianTone tone2;
  double detuning = 0.0;  // Delta_n
};

struct PulseSchedule {
  std::vector<TransferSet> transfer_sets;
  double t_start = -12.5;
  double t_end = 12.5;
  bool shared_tone1 = true;

  double duration() const { return t_end - t_start; }
  void validate() const;
};

enum class EdagRound { first, second };

// verbatim: tabulated frequencies. derived: shared omega_1 from the first row
// and each omega_2 placed exactly on the two-photon condition.
enum class FrequencyMode { verbatim, derived };

struct TableRow {
  int manifold;
  double eps1_mhz;
  double omega1_ghz;
  double eps2_mhz;
  double omega2_ghz;
  double delta_mhz;
};

// Tabulated drive parameters (f = omega / 2pi).
const std::vector<TableRow>& table1_rows(EdagRound round);
double table1_tau(EdagRound round);
inline constexpr double kTable1Width = 6.28;
inline constexpr double kTable1Window = 25.0;

double envelope(const GaussianTone& tone, double t);

// omega_1 = omega(|-,n> <-> |-,n+1>) - Delta_n, omega_2 = omega_1 - 2 lambda sqrt(n+1).
std::pair<double, double> tone_frequencies(int n, double delta_n, const DeviceParams& params);

// |(omega_1 - omega_2) - 2 lambda sqrt(n+1)|.
double two_photon_residual(const TransferSet& set, const DeviceParams& params);

// tau > (sqrt(2) - 1) T.
bool stirap_admissible(double tau, double width);

struct ScheduleOptions {
  FrequencyMode frequencies = FrequencyMode::verbatim;
  bool reverse_order = false;  // tone1 peaks at +tau instead of -tau
  double window = kTable1Window;
};

PulseSchedule table1_schedule(EdagRound round, const DeviceParams& params, const ScheduleOptions& options = {});

// One transfer set for manifold n built from tone_frequencies.
PulseSchedule single_transfer_schedule(int n, double delta_n, double eps1, double eps2, double tau, double width,
                                       double window, const DeviceParams& params);

// Distinct tones actually driven; a shared tone1 appears once.
std::vector<GaussianTone> active_tones(const PulseSchedule& schedule);

// Complex drive amplitude f(t) with H_drive = f a + conj(f) a^dagger in the
// cavity-rotating frame; zero outside the window.
Complex drive_coefficient(const std::vector<GaussianTone>& tones, double t, double omega_r);
Complex drive_coefficient(const PulseSchedule& schedule, double t, double omega_r);

OpMatrix drive_hamiltonian(const PulseSchedule& schedule, double t, const DeviceParams& params);

}  // namespace catamp
