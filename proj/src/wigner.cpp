#include "catamp/wigner.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include <unsupported/Eigen/MatrixFunctions>

#include "catamp/errors.hpp"
#include "catamp/states.hpp"

namespace catamp {

namespace {

constexpr double kTwoOverPi = 2.0 / std::numbers::pi;

// Exact <n|gamma>, n < count.
CVector coherent_column(Complex gamma, int count) {
  CVector c(count);
  c[0] = std::exp(-0.5 * std::norm(gamma));
  for (int n = 1; n < count; ++n) c[n] = c[n - 1] * gamma / std::sqrt(static_cast<double>(n));
  return c;
}

CMatrix generator(Complex beta, int dim) {
  const CMatrix a = annihilation_op(dim).matrix();
  return beta * a.adjoint() - std::conj(beta) * a;
}

int padded_dim(int n, double r) { return n + static_cast<int>(std::ceil(r * r + 6.0 * r + 30.0)); }

}  // namespace

OpMatrix displacement_op(Complex beta, int cavity_dim, double tol) {
  if (cavity_dim < 2) throw InvalidDimension("displacement_op needs cavity_dim >= 2");
  const CMatrix d = generator(beta, cavity_dim).exp();
  const double defect = (d.col(0) - coherent_column(beta, cavity_dim)).norm();
  if (defect > tol) {
    const int need = required_cavity_dim(std::abs(beta), tol * tol) + 4;
    throw TruncationError("displacement by |beta| = " + std::to_string(std::abs(beta)) + " has truncation defect " +
                              std::to_string(defect) + "; try cavity_dim >= " + std::to_string(need),
                          need);
  }
  return OpMatrix(d, cavity_dims(cavity_dim));
}

Complex displacement_element(Complex beta, int n, int m) {
  if (n < 0 || m < 0) throw InvalidArgument("Fock indices must be non-negative");
  const double x = std::norm(beta);
  if (n >= m) {
    const int k = n - m;
    const double pref = std::exp(0.5 * (std::lgamma(m + 1.0) - std::lgamma(n + 1.0)) - 0.5 * x);
    return pref * std::pow(beta, k) * std::assoc_laguerre(m, k, x);
  }
  const int k = m - n;
  const double pref = std::exp(0.5 * (std::lgamma(n + 1.0) - std::lgamma(m + 1.0)) - 0.5 * x);
  return pref * std::pow(-std::conj(beta), k) * std::assoc_laguerre(n, k, x);
}

std::vector<double> GridSpec::x_axis() const {
  std::vector<double> v(nx);
  for (int i = 0; i < nx; ++i) v[i] = nx == 1 ? x_min : x_min + (x_max - x_min) * i / (nx - 1);
  return v;
}

std::vector<double> GridSpec::p_axis() const {
  std::vector<double> v(np);
  for (int i = 0; i < np; ++i) v[i] = np == 1 ? p_min : p_min + (p_max - p_min) * i / (np - 1);
  return v;
}

void GridSpec::validate() const {
  if (nx < 1 || np < 1) throw InvalidArgument("grid needs at least one point per axis");
  if (x_max < x_min || p_max < p_min) throw InvalidArgument("grid bounds are reversed");
}

double WignerGrid::integral() const {
  const double dx = x_axis.size() > 1 ? x_axis[1] - x_axis[0] : 1.0;
  const double dp = p_axis.size() > 1 ? p_axis[1] - p_axis[0] : 1.0;
  return values.sum() * dx * dp;
}

double WignerGrid::max_abs() const { return values.cwiseAbs().maxCoeff(); }

DisplacementBlocks::DisplacementBlocks(int cavity_dim, double r_max) : n_(cavity_dim), r_max_(r_max) {
  if (cavity_dim < 1) throw InvalidDimension("cavity_dim must be positive");
  for (m_ = padded_dim(n_, r_max);; m_ = m_ + m_ / 2) {
    const CMatrix a = annihilation_op(m_).matrix();
    const CMatrix x = Complex(0.0, 1.0) * (a.adjoint() - a);
    Eigen::SelfAdjointEigenSolver<CMatrix> es(x);
    lambda_ = es.eigenvalues();
    v_top_ = es.eigenvectors().topRows(n_);
    const CMatrix probe = block(Complex(r_max, 0.0));
    const double defect = (probe.col(0) - coherent_column(Complex(r_max, 0.0), n_)).norm();
    if (defect < 1e-10 || m_ > 4000) break;
  }
}

CMatrix DisplacementBlocks::block(Complex gamma) const {
  const double r = std::abs(gamma);
  const double phi = std::arg(gamma);
  // D(r) = exp(-i r X) with X = i(a^dagger - a)
  CVector ph(lambda_.size());
  for (Eigen::Index k = 0; k < lambda_.size(); ++k) ph[k] = std::polar(1.0, -r * lambda_[k]);
  CMatrix d = v_top_ * ph.asDiagonal() * v_top_.adjoint();
  // D(r e^{i phi}) = R(phi) D(r) R(phi)^dagger with R(phi) = e^{i phi a^dagger a}
  if (phi != 0.0) {
    for (int i = 0; i < n_; ++i) {
      for (int j = 0; j < n_; ++j) d(i, j) *= std::polar(1.0, phi * (i - j));
    }
  }
  return d;
}

namespace {

void check_cavity(const DensityOp& rho) {
  if (rho.dims().qubit != 1) throw ShapeError("wigner expects a cavity-only state");
}

// (2/pi) Tr[rho D(2 beta) P] given the N x N block of D(2 beta).
double displaced_parity(const CMatrix& rho, const CMatrix& d) {
  Complex s = 0.0;
  const Eigen::Index n = rho.rows();
  for (Eigen::Index m = 0; m < n; ++m) {
    Complex col = 0.0;
    for (Eigen::Index k = 0; k < n; ++k) col += rho(m, k) * d(k, m);
    s += (m % 2 == 0) ? col : -col;
  }
  return kTwoOverPi * s.real();
}

double grid_radius(const GridSpec& g) {
  const double x = std::max(std::abs(g.x_min), std::abs(g.x_max));
  const double p = std::max(std::abs(g.p_min), std::abs(g.p_max));
  return std::hypot(x, p);
}

}  // namespace

WignerGrid wigner(const DensityOp& rho_cavity, const GridSpec& grid) {
  check_cavity(rho_cavity);
  grid.validate();
  WignerGrid out{grid.x_axis(), grid.p_axis(), RMatrix(grid.nx, grid.np)};
  const DisplacementBlocks blocks(rho_cavity.size(), 2.0 * grid_radius(grid));
  const CMatrix& rho = rho_cavity.matrix();
  const long total = static_cast<long>(grid.nx) * grid.np;
#pragma omp parallel for schedule(dynamic, 16)
  for (long idx = 0; idx < total; ++idx) {
    const int ix = static_cast<int>(idx / grid.np);
    const int ip = static_cast<int>(idx % grid.np);
    const Complex beta(out.x_axis[ix], out.p_axis[ip]);
    out.values(ix, ip) = displaced_parity(rho, blocks.block(2.0 * beta));
  }
  return out;
}

WignerGrid wigner_reference(const DensityOp& rho_cavity, const GridSpec& grid) {
  check_cavity(rho_cavity);
  grid.validate();
  WignerGrid out{grid.x_axis(), grid.p_axis(), RMatrix(grid.nx, grid.np)};
  const int n = rho_cavity.size();
  const int m = padded_dim(n, 2.0 * grid_radius(grid));
  for (int ix = 0; ix < grid.nx; ++ix) {
    for (int ip = 0; ip < grid.np; ++ip) {
      const Complex beta(out.x_axis[ix], out.p_axis[ip]);
      const CMatrix d = generator(2.0 * beta, m).exp().topLeftCorner(n, n);
      out.values(ix, ip) = displaced_parity(rho_cavity.matrix(), d);
    }
  }
  return out;
}

double wigner_at(const DensityOp& rho_cavity, Complex beta) {
  check_cavity(rho_cavity);
  const DisplacementBlocks blocks(rho_cavity.size(), 2.0 * std::abs(beta));
  return displaced_parity(rho_cavity.matrix(), blocks.block(2.0 * beta));
}

}  // namespace catamp
