#include "catamp/states.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "catamp/errors.hpp"

namespace catamp {

namespace {

// log of the Poisson weight |<n|alpha>|^2 for |alpha| = r.
double log_poisson(double r, int n) {
  if (r == 0.0) return n == 0 ? 0.0 : -INFINITY;
  return -r * r + 2.0 * n * std::log(r) - std::lgamma(n + 1.0);
}

// Sum of Poisson weights with n >= start, restricted to n % 2 == parity when parity >= 0.
double poisson_tail(double r, int start, int parity) {
  if (r == 0.0) return start <= 0 && parity != 1 ? 1.0 : 0.0;
  double sum = 0.0;
  const double mean = r * r;
  for (int n = std::max(start, 0);; ++n) {
    if (parity >= 0 && n % 2 != parity) continue;
    const double w = std::exp(log_poisson(r, n));
    sum += w;
    if (n > mean && w < 1e-40) break;
    if (n > start + 100000) break;
  }
  return sum;
}

CVector coherent_amplitudes(Complex alpha, int cavity_dim) {
  CVector c(cavity_dim);
  c[0] = std::exp(-0.5 * std::norm(alpha));
  for (int n = 1; n < cavity_dim; ++n) c[n] = c[n - 1] * alpha / std::sqrt(static_cast<double>(n));
  return c;
}

void check_tail(double tail, double tol, double r, const char* what) {
  if (tail > tol) {
    const int need = required_cavity_dim(r, tol);
    throw TruncationError(std::string(what) + ": truncation tail " + std::to_string(tail) +
                              " exceeds " + std::to_string(tol) + "; need cavity_dim >= " +
                              std::to_string(need),
                          need);
  }
}

}  // namespace

double coherent_tail(double abs_alpha, int cavity_dim) { return poisson_tail(abs_alpha, cavity_dim, -1); }

int required_cavity_dim(double abs_alpha, double tail_tol) {
  int n = 2;
  while (coherent_tail(abs_alpha, n) >= tail_tol) ++n;
  return n;
}

FockKet coherent_ket(Complex alpha, int cavity_dim, double tail_tol) {
  if (cavity_dim < 1) throw InvalidDimension("cavity dimension must be positive");
  check_tail(coherent_tail(std::abs(alpha), cavity_dim), tail_tol, std::abs(alpha), "coherent_ket");
  return FockKet::cavity(coherent_amplitudes(alpha, cavity_dim)).normalized();
}

FockKet cat_ket(const CatSpec& spec, int cavity_dim, double tail_tol) {
  if (cavity_dim < 2) throw InvalidDimension("cat_ket needs cavity_dim >= 2");
  const double r = std::abs(spec.alpha);
  const int keep = spec.parity == Parity::even ? 0 : 1;
  if (keep == 1 && r == 0.0) throw UndefinedState("odd cat state is undefined at alpha = 0");
  const double total = poisson_tail(r, 0, keep);
  if (keep == 1 && !(total > 0.0)) throw UndefinedState("odd cat amplitude underflows");
  check_tail(poisson_tail(r, cavity_dim, keep) / total, tail_tol, r, "cat_ket");

  // |alpha> +/- |-alpha> keeps only the matching Fock parity with doubled amplitude.
  CVector c = coherent_amplitudes(spec.alpha, cavity_dim);
  for (int n = 0; n < cavity_dim; ++n) c[n] = (n % 2 == keep) ? 2.0 * c[n] : Complex(0.0);
  if (keep == 1 && c.norm() == 0.0) {
    // alpha so small that e^{-|a|^2/2} alpha underflows; the limit is |1>.
    c[1] = 1.0;
  }
  return FockKet::cavity(std::move(c)).normalized();
}

OpMatrix shift_op(int cavity_dim, int k) {
  if (k < 1) throw InvalidArgument("shift power must be positive");
  if (k >= cavity_dim) {
    throw InvalidDimension("shift power " + std::to_string(k) + " must be below cavity_dim " +
                           std::to_string(cavity_dim));
  }
  CMatrix m = CMatrix::Zero(cavity_dim, cavity_dim);
  for (int n = 0; n + k < cavity_dim; ++n) m(n + k, n) = 1.0;
  return OpMatrix(std::move(m), cavity_dims(cavity_dim));
}

double fidelity(const FockKet& a, const FockKet& b) {
  if (!(a.dims() == b.dims())) throw ShapeError("fidelity: basis dimensions differ");
  return std::norm(b.amplitudes().dot(a.amplitudes()));
}

double fidelity(const DensityOp& rho, const FockKet& target) {
  if (!(rho.dims() == target.dims())) throw ShapeError("fidelity: basis dimensions differ");
  const CVector& t = target.amplitudes();
  return std::clamp(t.dot(rho.matrix() * t).real(), 0.0, 1.0);
}

int theory_cavity_dim(double abs_alpha, int k) {
  return std::max(40, required_cavity_dim(3.0 * abs_alpha, kTheoryTailTolerance) + k + 2);
}

double shifted_cat_fidelity(const CatSpec& spec, int k, double alpha_prime, int cavity_dim) {
  const FockKet input = cat_ket(spec, cavity_dim, kTheoryTailTolerance);
  const Parity target_parity = (k % 2 == 0) ? spec.parity : flipped(spec.parity);
  const FockKet target = cat_ket({Complex(alpha_prime, 0.0), target_parity}, cavity_dim, kTheoryTailTolerance);
  const CVector& in = input.amplitudes();
  const CVector& t = target.amplitudes();
  Complex overlap = 0.0;
  for (int m = 0; m + k < cavity_dim; ++m) overlap += std::conj(t[m + k]) * in[m];
  return std::norm(overlap);
}

GainResult optimal_gain(const CatSpec& spec, int k, int cavity_dim) {
  const double a = std::abs(spec.alpha);
  if (!(a > 0.0)) throw InvalidArgument("optimal_gain needs |alpha| > 0");
  if (k < 1) throw InvalidArgument("shift power must be positive");
  const int dim = cavity_dim > 0 ? cavity_dim : theory_cavity_dim(a, k);
  // Fidelity only depends on |alpha| for a real target grid; phase the input to real.
  const CatSpec real_spec{Complex(a, 0.0), spec.parity};
  auto f = [&](double g) { return shifted_cat_fidelity(real_spec, k, g * a, dim); };

  constexpr int kSteps = 200;
  std::vector<double> coarse(kSteps + 1);
  for (int i = 0; i <= kSteps; ++i) coarse[i] = f(1.0 + 0.01 * i);
  const int best = static_cast<int>(std::max_element(coarse.begin(), coarse.end()) - coarse.begin());
  if (best == 0 || best == kSteps) {
    std::ostringstream dump;
    for (int i = 0; i <= kSteps; ++i) dump << (1.0 + 0.01 * i) << "," << coarse[i] << "\n";
    throw BracketError("fidelity is monotone on G' in [1, 3]; no interior maximum", dump.str());
  }
  const double g = golden_section_max(f, 1.0 + 0.01 * (best - 1), 1.0 + 0.01 * (best + 1), 1e-4);
  GainResult r;
  r.gain = g;
  r.alpha_prime = g * a;
  r.fidelity = f(g);
  return r;
}

std::vector<CurvePoint> theory_curve(const CatSpec& spec, int k, std::span<const double> grid, int cavity_dim) {
  if (!std::is_sorted(grid.begin(), grid.end())) throw InvalidArgument("alpha' grid must be ascending");
  if (grid.empty()) return {};
  const double a = std::abs(spec.alpha);
  const double top = std::max(grid.back(), a);
  const int dim = cavity_dim > 0 ? cavity_dim
                                 : std::max(theory_cavity_dim(a, k),
                                            required_cavity_dim(top, kTheoryTailTolerance) + k + 2);
  const CatSpec real_spec{Complex(a, 0.0), spec.parity};
  std::vector<CurvePoint> out(grid.size());
  const long n = static_cast<long>(grid.size());
#pragma omp parallel for schedule(static)
  for (long i = 0; i < n; ++i) out[i] = {grid[i], shifted_cat_fidelity(real_spec, k, grid[i], dim)};
  return out;
}

}  // namespace catamp
