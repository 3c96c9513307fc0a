#include "doctest.h"

#include <cmath>
#include <vector>

#include "catamp/errors.hpp"
#include "catamp/states.hpp"

using namespace catamp;

namespace {

// Independent closed form of the theory fidelity. For real alpha, alpha' the
// overlap <SC_{alpha'}| (E^dagger)^k |SC_alpha> reduces to sums over Poisson
// amplitudes that we evaluate with long double directly.
double oracle_fidelity(double a, Parity p, int k, double ap) {
  const Parity target = k % 2 == 0 ? p : flipped(p);
  const int keep_in = p == Parity::even ? 0 : 1;
  const int keep_out = target == Parity::even ? 0 : 1;
  long double s = 0.0L, nin = 0.0L, nout = 0.0L;
  for (int m = 0; m < 200; ++m) {
    const long double lg = std::lgamma(m + 1.0L);
    const long double cin = (m % 2 == keep_in) ? std::exp(m * std::log((long double)a) - 0.5L * lg) : 0.0L;
    nin += cin * cin;
    const int n = m + k;
    const long double lgn = std::lgamma(n + 1.0L);
    const long double cout = (n % 2 == keep_out) ? std::exp(n * std::log((long double)ap) - 0.5L * lgn) : 0.0L;
    s += cin * cout;
  }
  for (int n = 0; n < 200; ++n) {
    const long double c = (n % 2 == keep_out) ? std::exp(n * std::log((long double)ap) - 0.5L * std::lgamma(n + 1.0L)) : 0.0L;
    nout += c * c;
  }
  return static_cast<double>(s * s / (nin * nout));
}

}  // namespace

TEST_CASE("coherent states") {
  const FockKet vac = coherent_ket(Complex(0.0), 5);
  CHECK(std::abs(vac[0] - Complex(1.0)) < 1e-15);
  const FockKet one = coherent_ket(Complex(1.0), 20);
  CHECK(one[0].real() == doctest::Approx(0.60653).epsilon(1e-5));
  CHECK(one[0].real() == doctest::Approx(std::exp(-0.5)).epsilon(1e-9));
  const FockKet c15 = coherent_ket(Complex(1.5), 25);
  double mean = 0.0;
  for (int n = 0; n < 25; ++n) mean += n * std::norm(c15[n]);
  CHECK(mean == doctest::Approx(2.25).epsilon(1e-7));
  try {
    (void)coherent_ket(Complex(3.0), 8);
    FAIL("expected a truncation error");
  } catch (const TruncationError& e) {
    CHECK(e.required_dim() > 8);
    CHECK(e.required_dim() == required_cavity_dim(3.0));
  }
}

TEST_CASE("cat states") {
  const FockKet tiny_even = cat_ket({Complex(1e-6), Parity::even}, 6);
  CHECK(std::norm(tiny_even[0]) == doctest::Approx(1.0));
  const FockKet zero_even = cat_ket({Complex(0.0), Parity::even}, 6);
  CHECK(std::norm(zero_even[0]) == doctest::Approx(1.0));
  const FockKet tiny_odd = cat_ket({Complex(1e-3), Parity::odd}, 6);
  CHECK(std::norm(tiny_odd[1]) > 1.0 - 1e-6);
  CHECK_THROWS_AS(cat_ket({Complex(0.0), Parity::odd}, 6), UndefinedState);

  const FockKet even = cat_ket({Complex(1.5), Parity::even}, 30);
  const FockKet odd = cat_ket({Complex(1.5), Parity::odd}, 30);
  for (int n = 1; n < 30; n += 2) CHECK(even[n] == Complex(0.0));
  for (int n = 0; n < 30; n += 2) CHECK(odd[n] == Complex(0.0));
  CHECK(even.norm_squared() == doctest::Approx(1.0).epsilon(1e-12));

  // N^+ (|a> + |-a>) against the direct superposition of coherent kets
  const FockKet a = coherent_ket(Complex(1.5), 30);
  const FockKet b = coherent_ket(Complex(-1.5), 30);
  const CVector sum = (a.amplitudes() + b.amplitudes()).normalized();
  CHECK(fidelity(even, FockKet::cavity(sum)) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("shift operator") {
  const FockKet zero = FockKet::basis(cavity_dims(6), 0);
  const FockKet out = shift_op(6, 1) * zero;
  CHECK(std::abs(out[1] - Complex(1.0)) == 0.0);

  const FockKet cat = cat_ket({Complex(1.5), Parity::even}, 40);
  CHECK((shift_op(40, 2) * cat).norm_squared() == doctest::Approx(1.0).epsilon(1e-10));

  const CMatrix s = shift_op(10, 2).matrix();
  const CMatrix sts = s.adjoint() * s;
  CHECK((sts.topLeftCorner(8, 8) - CMatrix::Identity(8, 8)).cwiseAbs().maxCoeff() == 0.0);

  const FockKet odd_out = shift_op(40, 1) * cat;
  for (int n = 0; n < 40; n += 2) CHECK(odd_out[n] == Complex(0.0));
  CHECK_THROWS(shift_op(5, 5));
  CHECK_THROWS_AS(shift_op(5, 0), InvalidArgument);
}

TEST_CASE("fidelity") {
  const FockKet c = coherent_ket(Complex(0.4, 0.9), 20);
  CHECK(fidelity(c, c) == doctest::Approx(1.0));
  const FockKet e = cat_ket({Complex(1.5), Parity::even}, 30);
  const FockKet o = cat_ket({Complex(1.5), Parity::odd}, 30);
  CHECK(fidelity(e, o) == 0.0);
  CHECK(fidelity(DensityOp::from_ket(e), e) == doctest::Approx(1.0));
  CHECK_THROWS_AS(fidelity(e, coherent_ket(Complex(0.1), 10)), ShapeError);
}

TEST_CASE("optimal gain against reference values") {
  struct Row {
    Parity p;
    double a, f, g;
  };
  const std::vector<Row> rows = {
      {Parity::even, 1.0, 0.854, 1.725}, {Parity::even, 1.5, 0.947, 1.377}, {Parity::even, 2.0, 0.974, 1.229},
      {Parity::even, 2.5, 0.988, 1.151}, {Parity::odd, 1.0, 0.681, 1.902},  {Parity::odd, 1.5, 0.866, 1.422},
      {Parity::odd, 2.0, 0.960, 1.235},  {Parity::odd, 2.5, 0.987, 1.151}};
  for (const auto& r : rows) {
    CAPTURE(r.a);
    const GainResult g = optimal_gain({Complex(r.a), r.p}, 2);
    CHECK(g.fidelity == doctest::Approx(r.f).epsilon(0.002 / r.f));
    CHECK(std::abs(g.gain - r.g) < 0.01);
    CHECK(g.alpha_prime == doctest::Approx(g.gain * r.a));
    CHECK(g.fidelity == doctest::Approx(oracle_fidelity(r.a, r.p, 2, g.alpha_prime)).epsilon(1e-9));
  }
}

TEST_CASE("single shift flips the target parity") {
  const GainResult g = optimal_gain({Complex(1.5), Parity::even}, 1);
  CHECK(g.fidelity > 0.99);
  CHECK(std::abs(g.alpha_prime - 1.78) < 0.02);
  CHECK(g.fidelity == doctest::Approx(oracle_fidelity(1.5, Parity::even, 1, g.alpha_prime)).epsilon(1e-9));
}

TEST_CASE("gain trends over alpha") {
  double prev_g[2] = {10.0, 10.0};
  double f_small[2], f_large[2];
  for (int pi = 0; pi < 2; ++pi) {
    const Parity p = pi == 0 ? Parity::even : Parity::odd;
    for (double a : {1.0, 1.5, 2.0, 2.5}) {
      const GainResult g = optimal_gain({Complex(a), p}, 2);
      CHECK(g.gain <= prev_g[pi] + 1e-9);
      prev_g[pi] = g.gain;
      if (a == 1.0) f_small[pi] = g.fidelity;
      if (a == 2.5) f_large[pi] = g.fidelity;
    }
    CHECK(f_large[pi] > f_small[pi]);
  }
  const double gap10 = std::abs(optimal_gain({Complex(1.0), Parity::even}, 2).fidelity -
                                optimal_gain({Complex(1.0), Parity::odd}, 2).fidelity);
  const double gap15 = std::abs(optimal_gain({Complex(1.5), Parity::even}, 2).fidelity -
                                optimal_gain({Complex(1.5), Parity::odd}, 2).fidelity);
  CHECK(gap15 < gap10);
}

TEST_CASE("theory curve") {
  const CatSpec spec{Complex(2.0), Parity::even};
  std::vector<double> grid;
  for (int i = 0; i <= 400; ++i) grid.push_back(2.0 + 4.0 * i / 400.0);
  const auto pts = theory_curve(spec, 2, grid);
  REQUIRE(pts.size() == grid.size());
  double best = 0.0, at = 0.0;
  for (const auto& p : pts) {
    if (p.fidelity > best) {
      best = p.fidelity;
      at = p.alpha_prime;
    }
  }
  const GainResult g = optimal_gain(spec, 2);
  CHECK(best == doctest::Approx(g.fidelity).epsilon(1e-4));
  CHECK(std::abs(at - g.alpha_prime) <= 0.01);
  CHECK(std::abs(g.fidelity - 0.974) < 0.002);
  CHECK(std::abs(g.gain - 1.229) < 0.01);

  const CatSpec big{Complex(2.5), Parity::even};
  const std::vector<double> one = {2.5};
  CHECK(theory_curve(big, 2, one)[0].fidelity < optimal_gain(big, 2).fidelity);
  CHECK(theory_curve(big, 2, one)[0].fidelity == doctest::Approx(oracle_fidelity(2.5, Parity::even, 2, 2.5)).epsilon(1e-9));

  const std::vector<double> bad = {2.0, 1.0};
  CHECK_THROWS_AS(theory_curve(spec, 2, bad), InvalidArgument);
}

TEST_CASE("golden section finds a smooth maximum") {
  const double x = golden_section_max([](double t) { return -(t - 0.37) * (t - 0.37); }, 0.0, 1.0, 1e-8);
  CHECK(x == doctest::Approx(0.37).epsilon(1e-7));
}
