#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "dnlab/bessel.hpp"
#include "dnlab/disk.hpp"

using namespace dnlab;

namespace {

constexpr double kPi = std::numbers::pi;

// Plain ascending-series oracle, kept separate from the library evaluator.
double oracle_bessel_i(int n, double x) {
  double term = 1.0;
  for (int m = 1; m <= n; ++m) term *= (x / 2.0) / m;
  double sum = term;
  for (int k = 1; k < 300; ++k) {
    term *= (x * x / 4.0) / (k * (n + k));
    sum += term;
    if (term < 1e-19 * sum) break;
  }
  return sum;
}

std::vector<double> sample_mode(int n, int nodes) {
  std::vector<double> phi(nodes);
  for (int k = 0; k < nodes; ++k) phi[k] = std::cos(2.0 * kPi * k * n / nodes);
  return phi;
}

}  // namespace

TEST_CASE("modified Bessel evaluation against the series oracle") {
  for (int n = 0; n <= 12; ++n) {
    for (double x : {0.1, 0.5, 1.0, 3.0, 8.0, 11.5}) {
      CHECK(bessel_i(n, x) ==
            doctest::Approx(oracle_bessel_i(n, x)).epsilon(1e-12));
    }
  }
  // Large-argument branch goes through the normalized recurrence.
  CHECK(bessel_i(0, 15.0) ==
        doctest::Approx(oracle_bessel_i(0, 15.0)).epsilon(1e-11));
  CHECK(bessel_i(4, 20.0) ==
        doctest::Approx(oracle_bessel_i(4, 20.0)).epsilon(1e-11));
}

TEST_CASE("three-term recurrence invariants") {
  // Residual measured relative to the term magnitude: the difference on
  // the left cancels catastrophically for large arguments, so comparing
  // against it directly would only probe roundoff.
  for (int n = 1; n <= 10; ++n) {
    for (double x : {0.3, 1.0, 2.5, 6.0, 14.0}) {
      const double lhs = bessel_i(n - 1, x) - bessel_i(n + 1, x);
      const double rhs = (2.0 * n / x) * bessel_i(n, x);
      const double scale = bessel_i(n - 1, x) + bessel_i(n + 1, x);
      CHECK(std::abs(lhs - rhs) <= 1e-12 * scale);
    }
    for (double x : {0.3, 1.0, 2.2}) {
      const double lhs = bessel_j(n - 1, x) + bessel_j(n + 1, x);
      const double rhs = (2.0 * n / x) * bessel_j(n, x);
      CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
    }
  }
}

TEST_CASE("boundary eigenvalues on Fourier modes") {
  SUBCASE("lambda = 0 is the Cauchy symbol |n|/2") {
    DiskModel flat{0.0};
    CHECK(dn_eigenvalue(flat, 0) == 0.0);
    CHECK(dn_eigenvalue(flat, 1) == doctest::Approx(0.5));
    CHECK(dn_eigenvalue(flat, -1) == doctest::Approx(0.5));
    CHECK(dn_eigenvalue(flat, 8) == doctest::Approx(4.0));
  }
  SUBCASE("lambda = 0.5 mode 0 is half the I1/I0 quotient at 1") {
    DiskModel model{0.5};
    const double expected = 0.5 * oracle_bessel_i(1, 1.0) / oracle_bessel_i(0, 1.0);
    CHECK(dn_eigenvalue(model, 0) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(dn_eigenvalue(model, 0) == doctest::Approx(0.22320).epsilon(1e-4));
  }
  SUBCASE("strictly increasing in lambda and in |n|") {
    for (int n = 0; n <= 8; ++n) {
      double prev = -1e300;
      for (double lambda : {0.0, 0.5, 1.0, 2.0, 4.0}) {
        const double mu = dn_eigenvalue(DiskModel{lambda}, n);
        CHECK(mu > prev);
        prev = mu;
      }
    }
    for (double lambda : {0.0, 0.5, 2.0}) {
      double prev = -1e300;
      for (int n = 0; n <= 8; ++n) {
        const double mu = dn_eigenvalue(DiskModel{lambda}, n);
        CHECK(mu > prev);
        prev = mu;
      }
    }
  }
  SUBCASE("negative lambda uses the oscillatory branch") {
    DiskModel model{-1.0};
    // (t/2) J0'(t)/J0(t) at t = sqrt(2) is negative: mass pulls inward.
    CHECK(dn_eigenvalue(model, 0) < 0.0);
    // Mode out of range is refused.
    CHECK_THROWS_AS(dn_eigenvalue(DiskModel{0.0, 4}, 9), InputError);
  }
}

TEST_CASE("Douglas energy of trigonometric data") {
  SUBCASE("constants") {
    CHECK(douglas_energy(std::vector<double>(512, 2.5)) ==
          doctest::Approx(0.0).epsilon(1e-12));
  }
  SUBCASE("cos theta at 4096 nodes hits pi/2 to 1e-6") {
    CHECK(douglas_energy(sample_mode(1, 4096)) ==
          doctest::Approx(kPi / 2.0).epsilon(1e-6 / (kPi / 2.0)));
  }
  SUBCASE("cos 2theta has twice the eigenvalue") {
    CHECK(douglas_energy(sample_mode(2, 1024)) ==
          doctest::Approx(kPi).epsilon(1e-9));
  }
  SUBCASE("energies match the spectral pairing for several modes") {
    // <D0 cos n., cos n.> = (n/2) pi
    for (int n = 1; n <= 4; ++n)
      CHECK(douglas_energy(sample_mode(n, 512)) ==
            doctest::Approx(0.5 * n * kPi).epsilon(1e-9));
  }
  SUBCASE("input validation") {
    CHECK_THROWS_AS(douglas_energy(std::vector<double>(7, 1.0)), InputError);
  }
}

TEST_CASE("Poisson kernel") {
  SUBCASE("center value is uniform") {
    for (double xi : {0.0, 1.0, 3.0})
      CHECK(poisson_kernel({0.0, 0.0}, xi) ==
            doctest::Approx(1.0 / (2.0 * kPi)));
  }
  SUBCASE("radial approach toward the source") {
    CHECK(poisson_kernel({0.5, 0.0}, 0.0) ==
          doctest::Approx(3.0 / (2.0 * kPi)));
  }
  SUBCASE("harmonic measure normalizes to one") {
    for (auto x : {std::array<double, 2>{0.3, -0.4},
                   std::array<double, 2>{-0.7, 0.1},
                   std::array<double, 2>{0.0, 0.85}}) {
      const int nodes = 1024;
      double mass = 0.0;
      for (int k = 0; k < nodes; ++k)
        mass += poisson_kernel(x, 2.0 * kPi * k / nodes) * (2.0 * kPi / nodes);
      CHECK(mass == doctest::Approx(1.0).epsilon(1e-10));
    }
  }
  SUBCASE("exterior points are rejected") {
    CHECK_THROWS_AS(poisson_kernel({1.0, 0.0}, 0.0), InputError);
  }
}

TEST_CASE("gauge function") {
  SUBCASE("lambda = 0 is identically one") {
    DiskModel flat{0.0};
    CHECK(gauge(flat, {0.3, 0.4}) == 1.0);
  }
  SUBCASE("lambda = 0.5 at the center") {
    DiskModel model{0.5};
    CHECK(gauge(model, {0.0, 0.0}) ==
          doctest::Approx(1.0 / oracle_bessel_i(0, 1.0)).epsilon(1e-12));
    CHECK(gauge(model, {0.0, 0.0}) == doctest::Approx(0.78985).epsilon(1e-4));
  }
  SUBCASE("bounded by one for nonnegative lambda") {
    DiskModel model{2.0};
    for (double r : {0.0, 0.3, 0.7, 0.95}) {
      const double g = gauge_radial(model, r);
      CHECK(g > 0.0);
      CHECK(g <= 1.0);
    }
  }
  SUBCASE("bounded but above one on the oscillatory side") {
    DiskModel model{-1.0};
    CHECK(gauge_radial(model, 0.0) > 1.0);
    CHECK(std::isfinite(gauge_radial(model, 0.0)));
  }
  SUBCASE("diverges at the gauge threshold") {
    DiskModel near{gauge_threshold() + 1e-4};
    CHECK(gauge_radial(near, 0.0) > 1e3);
    DiskModel below{gauge_threshold() - 1e-6};
    CHECK_THROWS_AS(gauge_radial(below, 0.0), NotGaugeable);
  }
}

TEST_CASE("V_lambda cross-identity with the mode-0 eigenvalue") {
  SUBCASE("lambda = 0 vanishes") {
    CHECK(v_lambda(DiskModel{0.0}) == 0.0);
  }
  SUBCASE("positive lambda matches mu_0 through the quadrature") {
    for (double lambda : {0.5, 1.0, 2.0}) {
      DiskModel model{lambda, 16, 512, 512};
      CHECK(v_lambda(model) ==
            doctest::Approx(dn_eigenvalue(model, 0)).epsilon(1e-6));
    }
  }
  SUBCASE("negative lambda gives a negative killing density") {
    DiskModel model{-1.0, 16, 256, 256};
    const double v = v_lambda(model);
    CHECK(v < 0.0);
    CHECK(v == doctest::Approx(dn_eigenvalue(model, 0)).epsilon(1e-6));
  }
  SUBCASE("below the threshold the quadrature is refused") {
    CHECK_THROWS_AS(v_lambda(DiskModel{-3.0}), NotGaugeable);
  }
}

TEST_CASE("first Dirichlet eigenvalue via the Bessel root") {
  const double j01 = bessel_j0_zero(1);
  CHECK(j01 == doctest::Approx(2.404826).epsilon(1e-6));
  CHECK(std::abs(bessel_j(0, j01)) <= 1e-13);
  CHECK(first_dirichlet_eigenvalue() ==
        doctest::Approx(-5.783186).epsilon(1e-6));
  CHECK(gauge_threshold() == doctest::Approx(-2.891593).epsilon(1e-6));

  // Bracketed bisection oracle agrees to 1e-12.
  double lo = 2.0, hi = 3.0;
  for (int it = 0; it < 80; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (bessel_j(0, lo) * bessel_j(0, mid) <= 0.0)
      hi = mid;
    else
      lo = mid;
  }
  CHECK(std::abs(j01 - 0.5 * (lo + hi)) <= 1e-12);
}
