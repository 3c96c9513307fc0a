#include "catamp/jc_model.hpp"

#include <cmath>
#include <string>

#include "catamp/errors.hpp"

namespace catamp {

void DeviceParams::validate() const {
  if (!(lambda > 0.0)) throw InvalidArgument("lambda must be positive");
  if (kappa < 0.0 || gamma_minus < 0.0 || gamma_phi < 0.0) throw InvalidArgument("decay rates must be non-negative");
  if (cavity_dim < 2) throw InvalidDimension("cavity_dim must be at least 2");
}

void SweepSchedule::validate() const {
  if (!(duration > 0.0)) throw InvalidArgument("sweep duration must be positive");
}

OpMatrix static_hamiltonian(const DeviceParams& params, double delta) {
  params.validate();
  const int nc = params.cavity_dim;
  const OpMatrix a = annihilation_op(nc);
  const OpMatrix jc = tensor_product(sigma_minus(), a.adjoint()) + tensor_product(sigma_plus(), a);
  const CMatrix h = 0.5 * delta * embed_qubit(sigma_z(), nc).matrix() + params.lambda * jc.matrix();
  return OpMatrix(h, joint_dims(nc), true);
}

double mixing_angle(int n, double delta, double lambda) {
  if (!(lambda > 0.0)) throw InvalidArgument("lambda must be positive");
  return 0.5 * std::atan2(2.0 * lambda * std::sqrt(n + 1.0), delta);
}

double dressed_energy_plus(int n, double delta, double lambda) {
  return 0.5 * std::sqrt(delta * delta + 4.0 * lambda * lambda * (n + 1.0));
}

double dressed_energy_minus(int n, double delta, double lambda) { return -dressed_energy_plus(n, delta, lambda); }

DressedPair dressed_pair(int n, double delta, double lambda, int cavity_dim) {
  if (n < 0) throw InvalidArgument("manifold index must be non-negative");
  if (n + 1 >= cavity_dim) {
    throw TruncationError("manifold " + std::to_string(n) + " needs cavity_dim > " + std::to_string(n + 1), n + 2);
  }
  const double th = mixing_angle(n, delta, lambda);
  const BasisDims d = joint_dims(cavity_dim);
  CVector plus = CVector::Zero(d.size());
  CVector minus = CVector::Zero(d.size());
  const int e_n = joint_index(cavity_dim, 1, n);
  const int g_n1 = joint_index(cavity_dim, 0, n + 1);
  plus[e_n] = std::cos(th);
  plus[g_n1] = std::sin(th);
  minus[e_n] = -std::sin(th);
  minus[g_n1] = std::cos(th);
  return {FockKet(std::move(plus), d), FockKet(std::move(minus), d), dressed_energy_plus(n, delta, lambda),
          dressed_energy_minus(n, delta, lambda), th};
}

double transition_frequency(TransitionKind kind, int n, const DeviceParams& params, double delta) {
  if (n < 0) throw InvalidArgument("manifold index must be non-negative");
  const double upper = dressed_energy_minus(n + 1, delta, params.lambda);
  const double lower = kind == TransitionKind::minus_minus ? dressed_energy_minus(n, delta, params.lambda)
                                                           : dressed_energy_plus(n, delta, params.lambda);
  // One extra photon carries omega_r in the lab frame.
  return params.omega_r + upper - lower;
}

double sweep_delta(const SweepSchedule& schedule, double t) {
  schedule.validate();
  if (t < 0.0 || t > schedule.duration) throw InvalidArgument("sweep time outside [0, duration]");
  if (t == schedule.duration) return schedule.delta_end;
  double u = t / schedule.duration;
  if (schedule.profile == SweepProfile::smoothstep) u = u * u * (3.0 - 2.0 * u);
  return schedule.delta_start + (schedule.delta_end - schedule.delta_start) * u;
}

}  // namespace catamp
