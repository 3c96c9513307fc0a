#pragma once

// Truncated Fock-space linear algebra.
//
// Basis ordering is qubit-major throughout the library: the joint index of
// |q, n> is q * cavity_dim + n with q = 0 for |g> and q = 1 for |e>. A pure
// cavity state uses qubit dimension 1. sigma_z has sigma_z|e> = +|e> and
// sigma_z|g> = -|g>.

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace catamp {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

struct BasisDims {
  int qubit = 2;
  int cavity = 1;

  int size() const { return qubit * cavity; }
  bool operator==(const BasisDims&) const = default;
};

inline BasisDims joint_dims(int cavity_dim) { return {2, cavity_dim}; }
inline BasisDims cavity_dims(int cavity_dim) { return {1, cavity_dim}; }

inline int joint_index(int cavity_dim, int qubit, int n) { return qubit * cavity_dim + n; }

// Complex amplitude vector over a truncated tensor basis.
class FockKet {
 public:
  FockKet(CVector amplitudes, BasisDims dims);

  static FockKet basis(BasisDims dims, int index);
  static FockKet cavity(CVector amplitudes);

  const CVector& amplitudes() const { return amps_; }
  CVector& amplitudes() { return amps_; }
  BasisDims dims() const { return dims_; }
  int size() const { return static_cast<int>(amps_.size()); }
  Complex operator[](int i) const { return amps_[i]; }

  double norm_squared() const { return amps_.squaredNorm(); }
  FockKet normalized() const;

 private:
  CVector amps_;
  BasisDims dims_;
};

struct DensityReport {
  double hermiticity_residual = 0.0;  // max |rho - rho^dagger| elementwise
  double trace_error = 0.0;           // |Tr rho - 1|
  double min_eigenvalue = 0.0;
};

struct DensityTolerances {
  double hermiticity = 1e-10;
  double trace = 1e-8;
  double positivity = 1e-8;  // min eigenvalue >= -positivity
};

// Hermitian, unit-trace density matrix on the same basis as FockKet.
class DensityOp {
 public:
  DensityOp(CMatrix matrix, BasisDims dims);

  static DensityOp from_ket(const FockKet& ket);

  const CMatrix& matrix() const { return m_; }
  CMatrix& matrix() { return m_; }
  BasisDims dims() const { return dims_; }
  int size() const { return static_cast<int>(m_.rows()); }

  Complex trace() const { return m_.trace(); }
  DensityReport report() const;
  // Throws InvariantViolation when a bound is exceeded.
  void validate(const DensityTolerances& tol = {}) const;

 private:
  CMatrix m_;
  BasisDims dims_;
};

class OpMatrix {
 public:
  OpMatrix(CMatrix matrix, BasisDims dims, bool hermitian = false);

  const CMatrix& matrix() const { return m_; }
  BasisDims dims() const { return dims_; }
  bool hermitian() const { return hermitian_; }
  int size() const { return static_cast<int>(m_.rows()); }

  OpMatrix adjoint() const;

 private:
  CMatrix m_;
  BasisDims dims_;
  bool hermitian_;
};

OpMatrix operator*(const OpMatrix& a, const OpMatrix& b);
OpMatrix operator+(const OpMatrix& a, const OpMatrix& b);
OpMatrix operator-(const OpMatrix& a, const OpMatrix& b);
OpMatrix operator*(Complex s, const OpMatrix& a);
FockKet operator*(const OpMatrix& op, const FockKet& ket);

// Cavity operators (qubit dimension 1).
OpMatrix annihilation_op(int cavity_dim);
OpMatrix creation_op(int cavity_dim);
OpMatrix number_op(int cavity_dim);
OpMatrix parity_op(int cavity_dim);
// exp(i pi a^dagger a) evaluated on the diagonal; agrees with parity_op.
OpMatrix parity_op_exponential(int cavity_dim);
OpMatrix identity_op(BasisDims dims);

// Two-level operators in the {g, e} basis.
OpMatrix sigma_z();
OpMatrix sigma_minus();  // |g><e|
OpMatrix sigma_plus();   // |e><g|
OpMatrix sigma_x();

FockKet qubit_ground();
FockKet qubit_excited();

// Kronecker products with the qubit factor on the left.
OpMatrix tensor_product(const OpMatrix& a, const OpMatrix& b);
FockKet tensor_product(const FockKet& a, const FockKet& b);

OpMatrix embed_qubit(const OpMatrix& qubit_op, int cavity_dim);
OpMatrix embed_cavity(const OpMatrix& cavity_op);

DensityOp partial_trace_qubit(const DensityOp& rho);
// Reduced qubit state (2x2) of a joint density operator.
CMatrix reduced_qubit(const DensityOp& rho);

Complex expectation(const FockKet& ket, const OpMatrix& op);
Complex expectation(const DensityOp& rho, const OpMatrix& op);

// Population of the given cavity Fock levels summed over the qubit factor.
double fock_population(const DensityOp& rho, int n);
double fock_population(const FockKet& ket, int n);

// Compressed-row sparse operator for the integrator hot loop.
struct SparseOp {
  int dim = 0;
  std::vector<int> row_ptr;
  std::vector<int> cols;
  std::vector<Complex> vals;

  static SparseOp from_dense(const CMatrix& m, double drop_tol = 0.0);
  static SparseOp from_op(const OpMatrix& op) { return from_dense(op.matrix()); }

  int nonzeros() const { return static_cast<int>(vals.size()); }
  CMatrix to_dense() const;
  SparseOp adjoint() const;
};

}  // namespace catamp
