#include "catamp/hilbert.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/Eigenvalues>

#include "catamp/errors.hpp"

namespace catamp {

namespace {

void require_square(const CMatrix& m, BasisDims dims, const char* what) {
  if (m.rows() != m.cols() || m.rows() != dims.size()) {
    throw ShapeError(std::string(what) + ": matrix is " + std::to_string(m.rows()) + "x" +
                     std::to_string(m.cols()) + ", basis has " + std::to_string(dims.size()) +
                     " states");
  }
}

void require_same_dims(BasisDims a, BasisDims b, const char* what) {
  if (!(a == b)) {
    throw ShapeError(std::string(what) + ": basis dimensions (" + std::to_string(a.qubit) + "," +
                     std::to_string(a.cavity) + ") vs (" + std::to_string(b.qubit) + "," +
                     std::to_string(b.cavity) + ")");
  }
}

void require_cavity_dim(int cavity_dim, int minimum) {
  if (cavity_dim < minimum) {
    throw InvalidDimension("cavity dimension " + std::to_string(cavity_dim) +
                           " is below the minimum " + std::to_string(minimum));
  }
}

}  // namespace

// ---------------------------------------------------------------- FockKet

FockKet::FockKet(CVector amplitudes, BasisDims dims) : amps_(std::move(amplitudes)), dims_(dims) {
  if (dims.qubit < 1 || dims.cavity < 1) throw InvalidDimension("basis dimensions must be positive");
  if (amps_.size() != dims.size()) {
    throw ShapeError("ket length " + std::to_string(amps_.size()) + " does not match basis size " +
                     std::to_string(dims.size()));
  }
}

FockKet FockKet::basis(BasisDims dims, int index) {
  if (index < 0 || index >= dims.size()) throw ShapeError("basis index out of range");
  CVector v = CVector::Zero(dims.size());
  v[index] = 1.0;
  return FockKet(std::move(v), dims);
}

FockKet FockKet::cavity(CVector amplitudes) {
  const int n = static_cast<int>(amplitudes.size());
  return FockKet(std::move(amplitudes), cavity_dims(n));
}

FockKet FockKet::normalized() const {
  const double nrm = amps_.norm();
  if (!(nrm > 0.0)) throw UndefinedState("cannot normalize a zero vector");
  return FockKet(amps_ / nrm, dims_);
}

// -------------------------------------------------------------- DensityOp

DensityOp::DensityOp(CMatrix matrix, BasisDims dims) : m_(std::move(matrix)), dims_(dims) {
  require_square(m_, dims_, "DensityOp");
}

DensityOp DensityOp::from_ket(const FockKet& ket) {
  const CVector& v = ket.amplitudes();
  return DensityOp(v * v.adjoint(), ket.dims());
}

DensityReport DensityOp::report() const {
  DensityReport r;
  r.hermiticity_residual = (m_ - m_.adjoint()).cwiseAbs().maxCoeff();
  r.trace_error = std::abs(m_.trace() - Complex(1.0, 0.0));
  const CMatrix herm = 0.5 * (m_ + m_.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(herm, Eigen::EigenvaluesOnly);
  r.min_eigenvalue = es.eigenvalues().minCoeff();
  return r;
}

void DensityOp::validate(const DensityTolerances& tol) const {
  const DensityReport r = report();
  if (r.hermiticity_residual > tol.hermiticity) {
    throw InvariantViolation("density operator not Hermitian: residual " +
                             std::to_string(r.hermiticity_residual));
  }
  if (r.trace_error > tol.trace) {
    throw InvariantViolation("density operator trace off by " + std::to_string(r.trace_error));
  }
  if (r.min_eigenvalue < -tol.positivity) {
    throw InvariantViolation("density operator has negative eigenvalue " +
                             std::to_string(r.min_eigenvalue));
  }
}

// --------------------------------------------------------------- OpMatrix

OpMatrix::OpMatrix(CMatrix matrix, BasisDims dims, bool hermitian)
    : m_(std::move(matrix)), dims_(dims), hermitian_(hermitian) {
  require_square(m_, dims_, "OpMatrix");
}

OpMatrix OpMatrix::adjoint() const { return OpMatrix(m_.adjoint(), dims_, hermitian_); }

OpMatrix operator*(const OpMatrix& a, const OpMatrix& b) {
  require_same_dims(a.dims(), b.dims(), "operator product");
  return OpMatrix(a.matrix() * b.matrix(), a.dims());
}

OpMatrix operator+(const OpMatrix& a, const OpMatrix& b) {
  require_same_dims(a.dims(), b.dims(), "operator sum");
  return OpMatrix(a.matrix() + b.matrix(), a.dims(), a.hermitian() && b.hermitian());
}

OpMatrix operator-(const OpMatrix& a, const OpMatrix& b) {
  require_same_dims(a.dims(), b.dims(), "operator difference");
  return OpMatrix(a.matrix() - b.matrix(), a.dims(), a.hermitian() && b.hermitian());
}

OpMatrix operator*(Complex s, const OpMatrix& a) {
  return OpMatrix(s * a.matrix(), a.dims(), a.hermitian() && s.imag() == 0.0);
}

FockKet operator*(const OpMatrix& op, const FockKet& ket) {
  require_same_dims(op.dims(), ket.dims(), "operator on ket");
  return FockKet(op.matrix() * ket.amplitudes(), ket.dims());
}

// -------------------------------------------------------------- operators

OpMatrix annihilation_op(int cavity_dim) {
  require_cavity_dim(cavity_dim, 2);
  CMatrix a = CMatrix::Zero(cavity_dim, cavity_dim);
  for (int n = 1; n < cavity_dim; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return OpMatrix(std::move(a), cavity_dims(cavity_dim));
}

OpMatrix creation_op(int cavity_dim) { return annihilation_op(cavity_dim).adjoint(); }

OpMatrix number_op(int cavity_dim) {
  require_cavity_dim(cavity_dim, 1);
  CMatrix m = CMatrix::Zero(cavity_dim, cavity_dim);
  for (int n = 0; n < cavity_dim; ++n) m(n, n) = static_cast<double>(n);
  return OpMatrix(std::move(m), cavity_dims(cavity_dim), true);
}

OpMatrix parity_op(int cavity_dim) {
  require_cavity_dim(cavity_dim, 1);
  CMatrix m = CMatrix::Zero(cavity_dim, cavity_dim);
  for (int n = 0; n < cavity_dim; ++n) m(n, n) = (n % 2 == 0) ? 1.0 : -1.0;
  return OpMatrix(std::move(m), cavity_dims(cavity_dim), true);
}

OpMatrix parity_op_exponential(int cavity_dim) {
  require_cavity_dim(cavity_dim, 1);
  CMatrix m = CMatrix::Zero(cavity_dim, cavity_dim);
  for (int n = 0; n < cavity_dim; ++n) {
    m(n, n) = std::exp(Complex(0.0, std::numbers::pi * static_cast<double>(n)));
  }
  return OpMatrix(std::move(m), cavity_dims(cavity_dim), true);
}

OpMatrix identity_op(BasisDims dims) {
  return OpMatrix(CMatrix::Identity(dims.size(), dims.size()), dims, true);
}

OpMatrix sigma_z() {
  CMatrix m = CMatrix::Zero(2, 2);
  m(0, 0) = -1.0;
  m(1, 1) = 1.0;
  return OpMatrix(std::move(m), {2, 1}, true);
}

OpMatrix sigma_minus() {
  CMatrix m = CMatrix::Zero(2, 2);
  m(0, 1) = 1.0;
  return OpMatrix(std::move(m), {2, 1});
}

OpMatrix sigma_plus() { return sigma_minus().adjoint(); }

OpMatrix sigma_x() {
  CMatrix m = CMatrix::Zero(2, 2);
  m(0, 1) = 1.0;
  m(1, 0) = 1.0;
  return OpMatrix(std::move(m), {2, 1}, true);
}

FockKet qubit_ground() { return FockKet::basis({2, 1}, 0); }
FockKet qubit_excited() { return FockKet::basis({2, 1}, 1); }

// ---------------------------------------------------------------- tensors

namespace {

BasisDims product_dims(BasisDims a, BasisDims b) {
  // A pure qubit factor (cavity 1) times a pure cavity factor (qubit 1) gives
  // the joint layout; anything else is kept as a flat product in the cavity slot.
  if (a.cavity == 1 && b.qubit == 1) return {a.qubit, b.cavity};
  return {1, a.size() * b.size()};
}

}  // namespace

OpMatrix tensor_product(const OpMatrix& a, const OpMatrix& b) {
  const CMatrix& A = a.matrix();
  const CMatrix& B = b.matrix();
  CMatrix out(A.rows() * B.rows(), A.cols() * B.cols());
  for (Eigen::Index i = 0; i < A.rows(); ++i) {
    for (Eigen::Index j = 0; j < A.cols(); ++j) {
      out.block(i * B.rows(), j * B.cols(), B.rows(), B.cols()) = A(i, j) * B;
    }
  }
  return OpMatrix(std::move(out), product_dims(a.dims(), b.dims()), a.hermitian() && b.hermitian());
}

FockKet tensor_product(const FockKet& a, const FockKet& b) {
  const CVector& A = a.amplitudes();
  const CVector& B = b.amplitudes();
  CVector out(A.size() * B.size());
  for (Eigen::Index i = 0; i < A.size(); ++i) out.segment(i * B.size(), B.size()) = A[i] * B;
  return FockKet(std::move(out), product_dims(a.dims(), b.dims()));
}

OpMatrix embed_qubit(const OpMatrix& qubit_op, int cavity_dim) {
  if (qubit_op.dims() != BasisDims{2, 1}) throw ShapeError("embed_qubit expects a 2x2 operator");
  return tensor_product(qubit_op, identity_op(cavity_dims(cavity_dim)));
}

OpMatrix embed_cavity(const OpMatrix& cavity_op) {
  if (cavity_op.dims().qubit != 1) throw ShapeError("embed_cavity expects a cavity-only operator");
  return tensor_product(identity_op({2, 1}), cavity_op);
}

DensityOp partial_trace_qubit(const DensityOp& rho) {
  const BasisDims d = rho.dims();
  if (d.qubit != 2) throw ShapeError("partial_trace_qubit expects basis dims (2, N)");
  const int nc = d.cavity;
  const CMatrix& m = rho.matrix();
  CMatrix out = m.block(0, 0, nc, nc) + m.block(nc, nc, nc, nc);
  return DensityOp(std::move(out), cavity_dims(nc));
}

CMatrix reduced_qubit(const DensityOp& rho) {
  const BasisDims d = rho.dims();
  if (d.qubit != 2) throw ShapeError("reduced_qubit expects basis dims (2, N)");
  const int nc = d.cavity;
  const CMatrix& m = rho.matrix();
  CMatrix q(2, 2);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) q(a, b) = m.block(a * nc, b * nc, nc, nc).trace();
  return q;
}

Complex expectation(const FockKet& ket, const OpMatrix& op) {
  require_same_dims(op.dims(), ket.dims(), "expectation");
  const CVector& v = ket.amplitudes();
  Complex e = v.dot(op.matrix() * v);
  if (op.hermitian()) e.imag(0.0);
  return e;
}

Complex expectation(const DensityOp& rho, const OpMatrix& op) {
  require_same_dims(op.dims(), rho.dims(), "expectation");
  // Tr[rho O] = sum_ij rho_ij O_ji
  Complex e = (rho.matrix().transpose().cwiseProduct(op.matrix())).sum();
  if (op.hermitian()) e.imag(0.0);
  return e;
}

double fock_population(const DensityOp& rho, int n) {
  const BasisDims d = rho.dims();
  if (n < 0 || n >= d.cavity) return 0.0;
  double p = 0.0;
  for (int q = 0; q < d.qubit; ++q) p += rho.matrix()(q * d.cavity + n, q * d.cavity + n).real();
  return p;
}

double fock_population(const FockKet& ket, int n) {
  const BasisDims d = ket.dims();
  if (n < 0 || n >= d.cavity) return 0.0;
  double p = 0.0;
  for (int q = 0; q < d.qubit; ++q) p += std::norm(ket[q * d.cavity + n]);
  return p;
}

// --------------------------------------------------------------- SparseOp

SparseOp SparseOp::from_dense(const CMatrix& m, double drop_tol) {
  if (m.rows() != m.cols()) throw ShapeError("SparseOp requires a square matrix");
  SparseOp s;
  s.dim = static_cast<int>(m.rows());
  s.row_ptr.reserve(s.dim + 1);
  s.row_ptr.push_back(0);
  for (int i = 0; i < s.dim; ++i) {
    for (int j = 0; j < s.dim; ++j) {
      if (std::abs(m(i, j)) > drop_tol) {
        s.cols.push_back(j);
        s.vals.push_back(m(i, j));
      }
    }
    s.row_ptr.push_back(static_cast<int>(s.cols.size()));
  }
  return s;
}

CMatrix SparseOp::to_dense() const {
  CMatrix m = CMatrix::Zero(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int k = row_ptr[i]; k < row_ptr[i + 1]; ++k) m(i, cols[k]) += vals[k];
  return m;
}

SparseOp SparseOp::adjoint() const { return from_dense(to_dense().adjoint()); }

}  // namespace catamp
