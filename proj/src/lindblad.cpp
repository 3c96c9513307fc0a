#include "catamp/lindblad.hpp"

#include <algorithm>
#include <string>
#include <type_traits>

namespace catamp {

namespace {

// y(:, j) += s * A x(:, j) for column j.
inline void spmv_col(const SparseOp& a, Complex s, const Complex* x, Complex* y) {
  for (int r = 0; r < a.dim; ++r) {
    Complex acc = 0.0;
    for (int p = a.row_ptr[r]; p < a.row_ptr[r + 1]; ++p) acc += a.vals[p] * x[a.cols[p]];
    y[r] += s * acc;
  }
}

// y += s * sum_p conj(A(j, c_p)) x(:, c_p), i.e. column j of x A^dagger.
inline void axpy_adj_col(const SparseOp& a, Complex s, const CMatrix& x, int j, Complex* y) {
  const int d = static_cast<int>(x.rows());
  for (int p = a.row_ptr[j]; p < a.row_ptr[j + 1]; ++p) {
    const Complex c = s * std::conj(a.vals[p]);
    const Complex* xc = x.data() + static_cast<Eigen::Index>(a.cols[p]) * d;
    for (int i = 0; i < d; ++i) y[i] += c * xc[i];
  }
}

}  // namespace

void TimeDependentHamiltonian::add_static(const OpMatrix& op) { add_term(op, Coefficient{}); }

void TimeDependentHamiltonian::add_term(const OpMatrix& op, Coefficient c) {
  if (!(op.dims() == dims_)) throw ShapeError("Hamiltonian term basis does not match");
  ops_.push_back(SparseOp::from_op(op));
  dense_.push_back(op.matrix());
  coeffs_.push_back(std::move(c));
}

CMatrix TimeDependentHamiltonian::dense(double t) const {
  CMatrix h = CMatrix::Zero(size(), size());
  for (std::size_t k = 0; k < dense_.size(); ++k) h += coefficient(k, t) * dense_[k];
  return h;
}

std::vector<CollapseOp> collapse_operators(const DeviceParams& params, BasisDims dims) {
  std::vector<CollapseOp> out;
  const bool joint = dims.qubit == 2;
  if (params.kappa > 0.0) {
    const OpMatrix a = annihilation_op(dims.cavity);
    out.push_back({"kappa", params.kappa, joint ? embed_cavity(a) : a});
  }
  if ((params.gamma_minus > 0.0 || params.gamma_phi > 0.0) && !joint) {
    throw ShapeError("qubit decay rates need a joint qubit-cavity basis");
  }
  if (params.gamma_minus > 0.0) out.push_back({"gamma_minus", params.gamma_minus, embed_qubit(sigma_minus(), dims.cavity)});
  if (params.gamma_phi > 0.0) out.push_back({"gamma_phi", 0.5 * params.gamma_phi, embed_qubit(sigma_z(), dims.cavity)});
  return out;
}

Generator::Generator(TimeDependentHamiltonian h, std::vector<CollapseOp> collapse)
    : h_(std::move(h)), collapse_(std::move(collapse)) {
  const int d = h_.size();
  CMatrix ks = CMatrix::Zero(d, d);
  for (std::size_t k = 0; k < h_.term_count(); ++k) {
    if (h_.is_static(k)) {
      ks += Complex(0.0, -1.0) * h_.op(k).to_dense();
    } else {
      dynamic_terms_.push_back(k);
    }
  }
  for (const auto& c : collapse_) {
    if (c.op.size() != d) throw ShapeError("collapse operator basis does not match");
    ks -= 0.5 * c.rate * (c.op.matrix().adjoint() * c.op.matrix());
    jumps_.push_back(SparseOp::from_op(c.op));
    rates_.push_back(c.rate);
  }

  // one pattern for K(t): static values plus a scatter list per driven term
  Eigen::MatrixXd weight = ks.cwiseAbs();
  for (std::size_t k : dynamic_terms_) weight += h_.op(k).to_dense().cwiseAbs();
  Eigen::MatrixXi slot = Eigen::MatrixXi::Constant(d, d, -1);
  k_t_.dim = d;
  k_t_.row_ptr.assign(1, 0);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      if (weight(i, j) > 0.0) {
        slot(i, j) = static_cast<int>(k_t_.cols.size());
        k_t_.cols.push_back(j);
        k_t_.vals.push_back(ks(i, j));
      }
    }
    k_t_.row_ptr.push_back(static_cast<int>(k_t_.cols.size()));
  }
  k_base_ = k_t_.vals;
  for (std::size_t k : dynamic_terms_) {
    const SparseOp& s = h_.op(k);
    std::vector<std::pair<int, Complex>> scatter;
    for (int r = 0; r < s.dim; ++r) {
      for (int p = s.row_ptr[r]; p < s.row_ptr[r + 1]; ++p) scatter.emplace_back(slot(r, s.cols[p]), s.vals[p]);
    }
    k_scatter_.push_back(std::move(scatter));
  }
}

void Generator::apply_k(double t, const CMatrix& x, CMatrix& out) const {
  const int d = h_.size();
  if (x.rows() != d) throw ShapeError("state dimension does not match the generator");
  std::copy(k_base_.begin(), k_base_.end(), k_t_.vals.begin());
  for (std::size_t i = 0; i < dynamic_terms_.size(); ++i) {
    const Complex c = Complex(0.0, -1.0) * h_.coefficient(dynamic_terms_[i], t);
    if (c == 0.0) continue;
    for (const auto& [pos, v] : k_scatter_[i]) k_t_.vals[pos] += c * v;
  }
  out.setZero(d, x.cols());
  const long cols = x.cols();
#pragma omp parallel for schedule(static) if (parallel_ && cols > 1)
  for (long j = 0; j < cols; ++j) {
    const Complex* xj = x.data() + j * d;
    Complex* yj = out.data() + j * d;
    spmv_col(k_t_, 1.0, xj, yj);
  }
}

void Generator::schrodinger(double t, const CMatrix& psi, CMatrix& out) const {
  if (dissipative()) throw InvalidArgument("Schroedinger evolution with collapse operators");
  apply_k(t, psi, out);
}

void Generator::lindblad(double t, const CMatrix& rho, CMatrix& out) const {
  const int d = h_.size();
  if (rho.rows() != d || rho.cols() != d) throw ShapeError("density matrix dimension does not match the generator");
  apply_k(t, rho, y_buf_);
  z_buf_.resize(jumps_.size());
  for (std::size_t l = 0; l < jumps_.size(); ++l) {
    z_buf_[l].setZero(d, d);
#pragma omp parallel for schedule(static) if (parallel_)
    for (long j = 0; j < d; ++j) spmv_col(jumps_[l], 1.0, rho.data() + j * d, z_buf_[l].data() + j * d);
  }
  // rho' = K rho + (K rho)^dagger + sum r (L rho) L^dagger
  out = y_buf_ + y_buf_.adjoint();
#pragma omp parallel for schedule(static) if (parallel_)
  for (long j = 0; j < d; ++j) {
    Complex* oj = out.data() + j * d;
    for (std::size_t l = 0; l < jumps_.size(); ++l) axpy_adj_col(jumps_[l], rates_[l], z_buf_[l], static_cast<int>(j), oj);
  }
}

void Generator::schrodinger_reference(double t, const CMatrix& psi, CMatrix& out) const {
  if (dissipative()) throw InvalidArgument("Schroedinger evolution with collapse operators");
  out = Complex(0.0, -1.0) * (h_.dense(t) * psi);
}

void Generator::lindblad_reference(double t, const CMatrix& rho, CMatrix& out) const {
  const CMatrix h = h_.dense(t);
  out = Complex(0.0, -1.0) * (h * rho - rho * h);
  for (const auto& c : collapse_) {
    const CMatrix& b = c.op.matrix();
    const CMatrix bdb = b.adjoint() * b;
    out += c.rate * (b * rho * b.adjoint() - 0.5 * (bdb * rho + rho * bdb));
  }
}

CMatrix lindblad_rhs(const DensityOp& rho, double t, const TimeDependentHamiltonian& h, const DeviceParams& params) {
  if (!(rho.dims() == h.dims())) throw ShapeError("lindblad_rhs: basis dimensions differ");
  const Generator g(h, collapse_operators(params, rho.dims()));
  CMatrix out;
  g.lindblad_reference(t, rho.matrix(), out);
  return out;
}

void IntegratorConfig::validate() const {
  if (method == Method::fixed_rk4 && !(dt > 0.0)) throw InvalidArgument("fixed step must be positive");
  if (method == Method::adaptive_rk45 && !(rel_tol > 0.0 && abs_tol > 0.0 && initial_step > 0.0)) {
    throw InvalidArgument("tolerances and initial step must be positive");
  }
  if (sample_stride < 0) throw InvalidArgument("sample_stride must be non-negative");
}

namespace {

void check_snapshot(const DensityOp& rho, double t) {
  const DensityReport r = rho.report();
  const auto& tol = kSnapshotTolerances;
  if (r.trace_error > tol.trace || r.hermiticity_residual > tol.hermiticity ||
      r.min_eigenvalue < -tol.positivity || !std::isfinite(r.min_eigenvalue)) {
    throw IntegrationDiverged("density matrix left its invariants at t = " + std::to_string(t) +
                              ": trace error " + std::to_string(r.trace_error) + ", hermiticity " +
                              std::to_string(r.hermiticity_residual) + ", min eigenvalue " +
                              std::to_string(r.min_eigenvalue));
  }
}

template <class State, class Wrap, class Rhs>
Trajectory<State> run(const CMatrix& y0, Wrap&& wrap, Rhs&& rhs, std::pair<double, double> span,
                      const IntegratorConfig& config, const std::vector<Observable<State>>& observables,
                      const char* norm_name, bool check) {
  Trajectory<State> tr;
  auto record = [&](double t, const CMatrix& y) {
    State s = wrap(y);
    if (check) {
      if constexpr (std::is_same_v<State, DensityOp>) check_snapshot(s, t);
    }
    if (!tr.times.empty() && t <= tr.times.back()) return;
    tr.times.push_back(t);
    if constexpr (std::is_same_v<State, DensityOp>) {
      tr.observables[norm_name].push_back(s.trace().real());
    } else {
      tr.observables[norm_name].push_back(s.norm_squared());
    }
    for (const auto& [name, fn] : observables) tr.observables[name].push_back(fn(s));
    if (config.keep_states || tr.states.empty()) {
      tr.states.push_back(std::move(s));
    } else {
      tr.states.back() = std::move(s);
    }
  };
  CMatrix y = y0;
  record(span.first, y);
  tr.stats = integrate(rhs, y, span.first, span.second, config, [&](double t, const CMatrix& yy, long step) {
    if (config.sample_stride > 0 && step % config.sample_stride == 0 && t < span.second) record(t, yy);
  });
  if (span.second > span.first) {
    record(span.second, y);
  }
  if (!config.keep_states && tr.states.size() > 1) tr.states.erase(tr.states.begin(), tr.states.end() - 1);
  return tr;
}

}  // namespace

Trajectory<DensityOp> evolve(const DensityOp& rho0, const TimeDependentHamiltonian& h, const DeviceParams& params,
                             std::pair<double, double> t_span, const IntegratorConfig& config,
                             const std::vector<Observable<DensityOp>>& observables) {
  if (!(rho0.dims() == h.dims())) throw ShapeError("evolve: basis dimensions differ");
  if (!std::isfinite(t_span.first) || !std::isfinite(t_span.second)) throw InvalidArgument("time span must be finite");
  rho0.validate();
  const Generator g(h, collapse_operators(params, rho0.dims()));
  const BasisDims dims = rho0.dims();
  return run<DensityOp>(
      rho0.matrix(), [&](const CMatrix& y) { return DensityOp(y, dims); },
      [&](double t, const CMatrix& y, CMatrix& dy) { g.lindblad(t, y, dy); }, t_span, config, observables, "trace",
      true);
}

Trajectory<FockKet> evolve_pure(const FockKet& ket0, const TimeDependentHamiltonian& h, const DeviceParams& params,
                                std::pair<double, double> t_span, const IntegratorConfig& config,
                                const std::vector<Observable<FockKet>>& observables) {
  if (params.has_decoherence()) throw InvalidArgument("evolve_pure needs all decoherence rates to be zero");
  if (!(ket0.dims() == h.dims())) throw ShapeError("evolve_pure: basis dimensions differ");
  if (!std::isfinite(t_span.first) || !std::isfinite(t_span.second)) throw InvalidArgument("time span must be finite");
  const Generator g(h, {});
  const BasisDims dims = ket0.dims();
  IntegratorConfig cfg = config;
  cfg.project_norm = true;
  return run<FockKet>(
      CMatrix(ket0.amplitudes()), [&](const CMatrix& y) { return FockKet(CVector(y.col(0)), dims); },
      [&](double t, const CMatrix& y, CMatrix& dy) { g.schrodinger(t, y, dy); }, t_span, cfg, observables, "norm",
      false);
}

}  // namespace catamp
