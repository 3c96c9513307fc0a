#pragma once

#include <complex>
#include <span>
#include <vector>

#include "catamp/hilbert.hpp"

namespace catamp {

enum class Parity { even, odd };

inline Parity flipped(Parity p) { return p == Parity::even ? Parity::odd : Parity::even; }
inline const char* to_string(Parity p) { return p == Parity::even ? "even" : "odd"; }

// N(|alpha> +/- |-alpha>), even for '+' and odd for '-'.
struct CatSpec {
  Complex alpha;
  Parity parity = Parity::even;
};

struct GainResult {
  double gain = 1.0;
  double fidelity = 0.0;
  double alpha_prime = 0.0;
};

struct CurvePoint {
  double alpha_prime;
  double fidelity;
};

inline constexpr double kKetTailTolerance = 1e-8;
inline constexpr double kTheoryTailTolerance = 1e-10;

// Smallest cavity dimension whose Poisson tail sum_{n >= N} |<n|alpha>|^2 is below tol.
int required_cavity_dim(double abs_alpha, double tail_tol = kKetTailTolerance);
// Poisson weight beyond the truncation.
double coherent_tail(double abs_alpha, int cavity_dim);

FockKet coherent_ket(Complex alpha, int cavity_dim, double tail_tol = kKetTailTolerance);
FockKet cat_ket(const CatSpec& spec, int cavity_dim, double tail_tol = kKetTailTolerance);

// sum_m |m + k><m| on the truncated cavity.
OpMatrix shift_op(int cavity_dim, int k);

double fidelity(const FockKet& a, const FockKet& b);
double fidelity(const DensityOp& rho, const FockKet& target);

// Cavity dimension large enough for every theory evaluation on G' in [1, 3].
int theory_cavity_dim(double abs_alpha, int k);

// Overlap |<SC_{alpha'}| (E^dagger)^k |SC_alpha>|^2 with the parity-correct target.
double shifted_cat_fidelity(const CatSpec& spec, int k, double alpha_prime, int cavity_dim);

// Coarse 0.01 grid over G' in [1, 3] followed by golden-section refinement.
GainResult optimal_gain(const CatSpec& spec, int k, int cavity_dim = 0);

// Pointwise fidelities on an ascending alpha' grid.
std::vector<CurvePoint> theory_curve(const CatSpec& spec, int k, std::span<const double> alpha_prime_grid,
                                     int cavity_dim = 0);

// Maximize a unimodal function on [lo, hi] to absolute tolerance tol. Returns argmax.
template <class F>
double golden_section_max(F&& f, double lo, double hi, double tol) {
  const double invphi = 0.6180339887498949;
  double a = lo, b = hi;
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace catamp
