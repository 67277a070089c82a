#include "dnlab/disk.hpp"

#include <cmath>
#include <numbers>

#include "dnlab/bessel.hpp"

namespace dnlab {

namespace {

constexpr double kPi = std::numbers::pi;

double sqr(double x) { return x * x; }

}  // namespace

double first_dirichlet_eigenvalue() {
  const double j01 = bessel_j0_zero(1);
  return -j01 * j01;
}

double gauge_threshold() { return 0.5 * first_dirichlet_eigenvalue(); }

double dn_eigenvalue(const DiskModel& model, int n) {
  const int mode = std::abs(n);
  if (mode > model.bessel_order_max)
    throw InputError("dn_eigenvalue: mode exceeds bessel_order_max");
  const double lambda = model.lambda;
  if (lambda == 0.0) return 0.5 * mode;
  if (lambda > 0.0) {
    const double s = std::sqrt(2.0 * lambda);
    return 0.5 * s * bessel_i_prime(mode, s) / bessel_i(mode, s);
  }
  const double t = std::sqrt(-2.0 * lambda);
  const double jn = bessel_j(mode, t);
  if (std::abs(jn) < 1e-12)
    throw NumericError(
        "dn_eigenvalue: lambda sits at a Dirichlet resonance for this mode");
  return 0.5 * t * bessel_j_prime(mode, t) / jn;
}

namespace {

// 6th-order periodic central difference of uniformly sampled phi.
std::vector<double> periodic_derivative(const std::vector<double>& phi) {
  const int n = static_cast<int>(phi.size());
  const double h = 2.0 * kPi / n;
  std::vector<double> d(n);
  for (int k = 0; k < n; ++k) {
    const double p1 = phi[(k + 1) % n], m1 = phi[(k - 1 + n) % n];
    const double p2 = phi[(k + 2) % n], m2 = phi[(k - 2 + n) % n];
    const double p3 = phi[(k + 3) % n], m3 = phi[(k - 3 + n) % n];
    d[k] = (45.0 * (p1 - m1) - 9.0 * (p2 - m2) + (p3 - m3)) / (60.0 * h);
  }
  return d;
}

double douglas_sum(const std::vector<double>& phi) {
  const int n = static_cast<int>(phi.size());
  const double h = 2.0 * kPi / n;
  const std::vector<double> dphi = periodic_derivative(phi);
  // Precompute 1/sin^2 of the grid offsets; the kernel depends only on k-l.
  std::vector<double> inv_sin2(n, 0.0);
  for (int d = 1; d < n; ++d) inv_sin2[d] = 1.0 / sqr(std::sin(0.5 * h * d));
  long double sum = 0.0L;
  for (int k = 0; k < n; ++k) {
    long double row = 4.0L * dphi[k] * dphi[k];  // diagonal limit
    for (int l = 0; l < n; ++l) {
      if (l == k) continue;
      const double diff = phi[k] - phi[l];
      row += static_cast<long double>(diff) * diff *
             inv_sin2[(k - l + n) % n];
    }
    sum += row;
  }
  return static_cast<double>(sum) * h * h / (16.0 * kPi);
}

}  // namespace

double douglas_energy(const std::vector<double>& phi_samples) {
  const int n = static_cast<int>(phi_samples.size());
  if (n < 8 || n % 2 != 0)
    throw InputError("douglas_energy: need an even sample count >= 8");
  const double full = douglas_sum(phi_samples);
  std::vector<double> half(n / 2);
  for (int k = 0; k < n / 2; ++k) half[k] = phi_samples[2 * k];
  const double coarse = douglas_sum(half);
  const double scale = std::max({std::abs(full), std::abs(coarse), 1.0});
  if (std::abs(full - coarse) > 1e-6 * scale)
    throw NumericError("douglas_energy: quadrature did not converge");
  return full;
}

double poisson_kernel(const std::array<double, 2>& x, double xi_angle) {
  const double r2 = x[0] * x[0] + x[1] * x[1];
  if (r2 >= 1.0) throw InputError("poisson_kernel: point must be interior");
  const double dx = x[0] - std::cos(xi_angle);
  const double dy = x[1] - std::sin(xi_angle);
  return (1.0 - r2) / (2.0 * kPi * (dx * dx + dy * dy));
}

double gauge_radial(const DiskModel& model, double r) {
  if (r < 0.0 || r >= 1.0 + 1e-12)
    throw InputError("gauge: |x| must be < 1");
  const double lambda = model.lambda;
  if (lambda == 0.0) return 1.0;
  if (lambda > 0.0) {
    const double s = std::sqrt(2.0 * lambda);
    return bessel_i(0, s * r) / bessel_i(0, s);
  }
  if (lambda <= gauge_threshold())
    throw NotGaugeable("gauge: lambda below half the first Dirichlet eigenvalue");
  const double t = std::sqrt(-2.0 * lambda);
  return bessel_j(0, t * r) / bessel_j(0, t);
}

double gauge(const DiskModel& model, const std::array<double, 2>& x) {
  return gauge_radial(model, std::hypot(x[0], x[1]));
}

void gauss_legendre(int n, double a, double b, std::vector<double>& nodes,
                    std::vector<double>& weights) {
  nodes.resize(n);
  weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    // Chebyshev seed, Newton on P_n via the three-term recurrence.
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double step = p1 / dp;
      x -= step;
      if (std::abs(step) < 1e-15) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    nodes[i] = 0.5 * (a + b) - 0.5 * (b - a) * x;
    nodes[n - 1 - i] = 0.5 * (a + b) + 0.5 * (b - a) * x;
    weights[i] = weights[n - 1 - i] = 0.5 * (b - a) * w;
  }
}

double v_lambda(const DiskModel& model) {
  const double lambda = model.lambda;
  if (lambda == 0.0) return 0.0;
  if (lambda <= gauge_threshold())
    throw NotGaugeable("v_lambda: lambda below the gauge threshold");

  // Polar coordinates centered at xi = (1, 0): x = xi - rho (cos psi, sin psi)
  // covers the disk for |psi| < pi/2, 0 < rho < 2 cos psi, and
  // K(x, xi) dx = (1/2 pi) (2 cos psi - rho) d rho d psi, which removes the
  // kernel singularity entirely.
  std::vector<double> psi_nodes, psi_weights, rho_nodes, rho_weights;
  gauss_legendre(model.quad_angular, -0.5 * kPi, 0.5 * kPi, psi_nodes,
                 psi_weights);
  gauss_legendre(model.quad_radial, 0.0, 1.0, rho_nodes, rho_weights);

  double sum = 0.0;
  for (int a = 0; a < model.quad_angular; ++a) {
    const double cpsi = std::cos(psi_nodes[a]);
    const double span = 2.0 * cpsi;
    double inner = 0.0;
    for (int r = 0; r < model.quad_radial; ++r) {
      const double rho = span * rho_nodes[r];
      const double rad2 = 1.0 - 2.0 * rho * cpsi + rho * rho;
      const double rad = std::sqrt(std::max(rad2, 0.0));
      inner += rho_weights[r] * (span - rho) *
               gauge_radial(model, std::min(rad, 1.0 - 1e-15));
    }
    sum += psi_weights[a] * span * inner;
  }
  return lambda * sum / (2.0 * kPi);
}

}  // namespace dnlab
