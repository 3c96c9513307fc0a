#pragma once

// Wigner function of a cavity state through displaced parity,
//   W(beta) = (2/pi) Tr[rho D(beta) P D(beta)^dagger],   beta = x + i p.

#include <vector>

#include "catamp/hilbert.hpp"

namespace catamp {

using RMatrix = Eigen::MatrixXd;

// exp(beta a^dagger - conj(beta) a) on the truncated space. The truncation
// defect ||D|0> - P_N|beta>|| must stay below tol, otherwise TruncationError.
OpMatrix displacement_op(Complex beta, int cavity_dim, double tol = 1e-8);

// <n|D(beta)|m> from the associated-Laguerre closed form.
Complex displacement_element(Complex beta, int n, int m);

struct GridSpec {
  double x_min = -4.0, x_max = 4.0;
  int nx = 81;
  double p_min = -4.0, p_max = 4.0;
  int np = 81;

  std::vector<double> x_axis() const;
  std::vector<double> p_axis() const;
  void validate() const;
};

struct WignerGrid {
  std::vector<double> x_axis;
  std::vector<double> p_axis;
  RMatrix values;  // values(ix, ip)

  // Riemann sum of W dx dp.
  double integral() const;
  double max_abs() const;
};

// Exact N x N blocks of D(gamma) for |gamma| up to r_max, from one eigendecomposition
// of i(a^dagger - a) in a padded space.
class DisplacementBlocks {
 public:
  DisplacementBlocks(int cavity_dim, double r_max);
  CMatrix block(Complex gamma) const;
  int working_dim() const { return m_; }

 private:
  int n_, m_;
  double r_max_;
  RVector lambda_;
  CMatrix v_top_;  // first n rows of the eigenvectors
};

// Fast path: padded eigendecomposition, grid points split across OpenMP threads.
WignerGrid wigner(const DensityOp& rho_cavity, const GridSpec& grid = {});
// Reference path: one padded matrix exponential per point, serial.
WignerGrid wigner_reference(const DensityOp& rho_cavity, const GridSpec& grid = {});

double wigner_at(const DensityOp& rho_cavity, Complex beta);

}  // namespace catamp
