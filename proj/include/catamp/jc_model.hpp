#pragma once

// Two-level Jaynes-Cummings model in the frame rotating at the cavity
// frequency for both qubit and cavity:
//
//   H = (delta / 2) sigma_z + lambda (a^dagger sigma_- + a sigma_+),
//   delta = omega_q - omega_r.
//
// Frequencies are angular in rad/us, times in us (see units.hpp).

#include "catamp/hilbert.hpp"
#include "catamp/units.hpp"

namespace catamp {

struct DeviceParams {
  double lambda = units::ghz(0.1);
  double omega_r = units::ghz(6.0);
  double kappa = 0.0;
  double gamma_minus = 0.0;
  double gamma_phi = 0.0;
  int cavity_dim = 25;

  void validate() const;
  bool has_decoherence() const { return kappa > 0.0 || gamma_minus > 0.0 || gamma_phi > 0.0; }
};

enum class SweepProfile { linear, smoothstep };

struct SweepSchedule {
  double delta_start = units::ghz(1.0);
  double delta_end = 0.0;
  double duration = 6.2;
  SweepProfile profile = SweepProfile::linear;

  void validate() const;
};

OpMatrix static_hamiltonian(const DeviceParams& params, double delta);

struct DressedPair {
  FockKet plus;
  FockKet minus;
  double energy_plus;
  double energy_minus;
  double theta;
};

// theta_n = atan2(2 lambda sqrt(n+1), delta) / 2, in (0, pi/2).
double mixing_angle(int n, double delta, double lambda);

// |+,n> = cos t |e,n> + sin t |g,n+1>,  |-,n> = -sin t |e,n> + cos t |g,n+1>.
DressedPair dressed_pair(int n, double delta, double lambda, int cavity_dim);

// Rotating-frame energies of |+,n> and |-,n>.
double dressed_energy_plus(int n, double delta, double lambda);
double dressed_energy_minus(int n, double delta, double lambda);

enum class TransitionKind { minus_minus, plus_minus };

// Lab-frame frequency of |-,n> <-> |-,n+1> (minus_minus) or |+,n> <-> |-,n+1> (plus_minus).
double transition_frequency(TransitionKind kind, int n, const DeviceParams& params, double delta = 0.0);

double sweep_delta(const SweepSchedule& schedule, double t);

}  // namespace catamp
