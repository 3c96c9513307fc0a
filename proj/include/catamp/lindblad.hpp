#pragma once

// Master-equation and Schroedinger integration on the joint basis.
//
//   d rho/dt = -i[H(t), rho] + kappa D[a] + gamma_minus D[sigma_-] + (gamma_phi / 2) D[sigma_z]
//   D[b] rho = b rho b^dagger - {b^dagger b, rho} / 2
//
// Kets travel through the integrator as d x 1 matrices.

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "catamp/errors.hpp"
#include "catamp/hilbert.hpp"
#include "catamp/jc_model.hpp"

namespace catamp {

using Coefficient = std::function<Complex(double)>;

// H(t) = sum_k c_k(t) S_k with constant operators S_k.
class TimeDependentHamiltonian {
 public:
  explicit TimeDependentHamiltonian(BasisDims dims) : dims_(dims) {}

  void add_static(const OpMatrix& op);
  void add_term(const OpMatrix& op, Coefficient c);

  BasisDims dims() const { return dims_; }
  int size() const { return dims_.size(); }
  std::size_t term_count() const { return ops_.size(); }
  const SparseOp& op(std::size_t k) const { return ops_[k]; }
  bool is_static(std::size_t k) const { return !coeffs_[k]; }
  Complex coefficient(std::size_t k, double t) const { return coeffs_[k] ? coeffs_[k](t) : Complex(1.0); }

  CMatrix dense(double t) const;

 private:
  BasisDims dims_;
  std::vector<SparseOp> ops_;
  std::vector<CMatrix> dense_;
  std::vector<Coefficient> coeffs_;
};

struct CollapseOp {
  std::string name;
  double rate;
  OpMatrix op;
};

// kappa on a, gamma_minus on sigma_-, gamma_phi / 2 on sigma_z; zero rates are dropped.
std::vector<CollapseOp> collapse_operators(const DeviceParams& params, BasisDims dims);

// Right-hand side of the master equation (or of i d psi/dt = H psi when no
// collapse operators are present). The fast kernel works on sparse operators
// with columns split across OpenMP threads; the reference kernel is dense,
// serial and literal.
class Generator {
 public:
  Generator(TimeDependentHamiltonian h, std::vector<CollapseOp> collapse);

  // d psi / dt = -i H psi.
  void schrodinger(double t, const CMatrix& psi, CMatrix& out) const;
  void lindblad(double t, const CMatrix& rho, CMatrix& out) const;

  void schrodinger_reference(double t, const CMatrix& psi, CMatrix& out) const;
  void lindblad_reference(double t, const CMatrix& rho, CMatrix& out) const;

  const TimeDependentHamiltonian& hamiltonian() const { return h_; }
  bool dissipative() const { return !collapse_.empty(); }
  void set_parallel(bool on) { parallel_ = on; }

 private:
  // out = K(t) x with K = -i H(t) - sum_j r_j L_j^dagger L_j / 2.
  void apply_k(double t, const CMatrix& x, CMatrix& out) const;

  TimeDependentHamiltonian h_;
  std::vector<CollapseOp> collapse_;
  std::vector<std::size_t> dynamic_terms_;
  mutable SparseOp k_t_;  // K(t), refilled on every call
  std::vector<Complex> k_base_;
  std::vector<std::vector<std::pair<int, Complex>>> k_scatter_;
  std::vector<SparseOp> jumps_;
  std::vector<double> rates_;
  bool parallel_ = true;
  mutable CMatrix y_buf_;
  mutable std::vector<CMatrix> z_buf_;
};

// Literal master-equation derivative, dense and serial.
CMatrix lindblad_rhs(const DensityOp& rho, double t, const TimeDependentHamiltonian& h, const DeviceParams& params);

enum class Method { fixed_rk4, adaptive_rk45 };

struct IntegratorConfig {
  Method method = Method::adaptive_rk45;
  double dt = 1e-4;  // fixed_rk4 step, us
  double rel_tol = 1e-8;
  double abs_tol = 1e-10;
  double initial_step = 5e-5;
  double min_step = 1e-13;
  long max_steps = 200'000'000;
  // Record a snapshot every sample_stride accepted steps; 0 keeps the endpoints only.
  int sample_stride = 0;
  bool keep_states = true;
  std::function<void(double)> progress;  // fraction of the span, called at 5% increments
  // Rescale to unit norm after every accepted step. Only valid for linear
  // homogeneous right-hand sides (the Schroedinger path); set by evolve_pure.
  bool project_norm = false;

  void validate() const;
};

struct IntegrationStats {
  long accepted = 0;
  long rejected = 0;
  long rhs_evaluations = 0;
  double max_norm_correction = 0.0;  // largest |1 - ||y||| removed by project_norm
};

// Invariant bounds checked on every density-matrix snapshot.
inline constexpr DensityTolerances kSnapshotTolerances{1e-8, 1e-6, 1e-7};

template <class State>
struct Trajectory {
  std::vector<double> times;
  std::vector<State> states;
  std::map<std::string, std::vector<double>> observables;
  IntegrationStats stats;

  const State& final_state() const { return states.back(); }
};

template <class State>
using Observable = std::pair<std::string, std::function<double(const State&)>>;

Trajectory<DensityOp> evolve(const DensityOp& rho0, const TimeDependentHamiltonian& h, const DeviceParams& params,
                             std::pair<double, double> t_span, const IntegratorConfig& config = {},
                             const std::vector<Observable<DensityOp>>& observables = {});

// Decoherence-free path; throws InvalidArgument when params carry nonzero rates.
Trajectory<FockKet> evolve_pure(const FockKet& ket0, const TimeDependentHamiltonian& h, const DeviceParams& params,
                                std::pair<double, double> t_span, const IntegratorConfig& config = {},
                                const std::vector<Observable<FockKet>>& observables = {});

// Generic driver. rhs(t, y, dy); on_accept(t, y, step_index) after every accepted step.
template <class Rhs, class OnAccept>
IntegrationStats integrate(Rhs&& rhs, CMatrix& y, double t0, double t1, const IntegratorConfig& cfg,
                           OnAccept&& on_accept);

// ---------------------------------------------------------------------------

namespace detail {

class ProgressTicker {
 public:
  ProgressTicker(const std::function<void(double)>& cb, double t0, double t1) : cb_(cb), t0_(t0), t1_(t1) {}
  void update(double t) {
    if (!cb_ || t1_ <= t0_) return;
    const int pct = static_cast<int>(20.0 * (t - t0_) / (t1_ - t0_));
    while (last_ < pct && last_ < 20) {
      ++last_;
      cb_(0.05 * last_);
    }
  }

 private:
  const std::function<void(double)>& cb_;
  double t0_, t1_;
  int last_ = 0;
};

inline double error_norm(const CMatrix& err, const CMatrix& y0, const CMatrix& y1, double rtol, double atol) {
  double sum = 0.0;
  const Eigen::Index n = err.size();
  for (Eigen::Index i = 0; i < n; ++i) {
    const double sc = atol + rtol * std::sqrt(std::max(std::norm(y0.data()[i]), std::norm(y1.data()[i])));
    sum += std::norm(err.data()[i]) / (sc * sc);
  }
  return std::sqrt(sum / static_cast<double>(n));
}

// The derivative of a linear homogeneous system scales with the state, so the
// FSAL stage stays consistent.
inline void project(CMatrix& y, CMatrix& k, IntegrationStats& st) {
  const double nrm = y.norm();
  if (!(nrm > 0.0)) return;
  st.max_norm_correction = std::max(st.max_norm_correction, std::abs(1.0 - nrm));
  y /= nrm;
  k /= nrm;
}

}  // namespace detail

template <class Rhs, class OnAccept>
IntegrationStats integrate(Rhs&& rhs, CMatrix& y, double t0, double t1, const IntegratorConfig& cfg,
                           OnAccept&& on_accept) {
  cfg.validate();
  IntegrationStats st;
  if (!(t1 >= t0)) throw InvalidArgument("time span must satisfy t1 >= t0");
  if (t1 == t0) return st;
  detail::ProgressTicker ticker(cfg.progress, t0, t1);
  const Eigen::Index r = y.rows(), c = y.cols();

  if (cfg.method == Method::fixed_rk4) {
    const long n = std::max(1L, static_cast<long>(std::ceil((t1 - t0) / cfg.dt - 1e-9)));
    const double h = (t1 - t0) / static_cast<double>(n);
    CMatrix k1(r, c), k2(r, c), k3(r, c), k4(r, c), tmp(r, c);
    for (long i = 0; i < n; ++i) {
      const double t = t0 + h * static_cast<double>(i);
      rhs(t, y, k1);
      tmp = y + (0.5 * h) * k1;
      rhs(t + 0.5 * h, tmp, k2);
      tmp = y + (0.5 * h) * k2;
      rhs(t + 0.5 * h, tmp, k3);
      tmp = y + h * k3;
      rhs(t + h, tmp, k4);
      y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      st.rhs_evaluations += 4;
      ++st.accepted;
      const double tn = (i + 1 == n) ? t1 : t0 + h * static_cast<double>(i + 1);
      if (!y.allFinite()) throw IntegrationDiverged("non-finite state at t = " + std::to_string(tn));
      if (cfg.project_norm) detail::project(y, k1, st);
      on_accept(tn, y, st.accepted);
      ticker.update(tn);
    }
    return st;
  }

  // Dormand-Prince 5(4) with FSAL.
  constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  constexpr double a21 = 1.0 / 5;
  constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                   a65 = -5103.0 / 18656;
  constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                   e6 = 22.0 / 525, e7 = -1.0 / 40;

  CMatrix k1(r, c), k2(r, c), k3(r, c), k4(r, c), k5(r, c), k6(r, c), k7(r, c), tmp(r, c), yn(r, c), err(r, c);
  double t = t0;
  double h = std::min(cfg.initial_step, t1 - t0);
  rhs(t, y, k1);
  ++st.rhs_evaluations;
  long steps = 0;
  while (t < t1) {
    if (++steps > cfg.max_steps) throw StiffnessError("step budget exhausted at t = " + std::to_string(t));
    bool last = false;
    if (t + h >= t1 || t1 - (t + h) < 1e-12 * std::abs(t1)) {
      h = t1 - t;
      last = true;
    }
    tmp = y + (h * a21) * k1;
    rhs(t + c2 * h, tmp, k2);
    tmp = y + h * (a31 * k1 + a32 * k2);
    rhs(t + c3 * h, tmp, k3);
    tmp = y + h * (a41 * k1 + a42 * k2 + a43 * k3);
    rhs(t + c4 * h, tmp, k4);
    tmp = y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
    rhs(t + c5 * h, tmp, k5);
    tmp = y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
    rhs(t + h, tmp, k6);
    yn = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    rhs(t + h, yn, k7);
    st.rhs_evaluations += 6;
    err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    const double en = detail::error_norm(err, y, yn, cfg.rel_tol, cfg.abs_tol);
    if (!std::isfinite(en)) {
      ++st.rejected;
      h *= 0.2;
      if (h < cfg.min_step) throw IntegrationDiverged("non-finite state at t = " + std::to_string(t));
      continue;
    }
    if (en <= 1.0) {
      t = last ? t1 : t + h;
      y.swap(yn);
      k1.swap(k7);
      if (cfg.project_norm) detail::project(y, k1, st);
      ++st.accepted;
      on_accept(t, y, st.accepted);
      ticker.update(t);
      const double fac = en == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(en, -0.2), 0.2, 5.0);
      h *= fac;
    } else {
      ++st.rejected;
      h *= std::clamp(0.9 * std::pow(en, -0.2), 0.2, 1.0);
      if (h < cfg.min_step) {
        throw StiffnessError("step size " + std::to_string(h) + " us below floor at t = " + std::to_string(t) +
                             " (error norm " + std::to_string(en) + ")");
      }
    }
  }
  return st;
}

}  // namespace catamp
