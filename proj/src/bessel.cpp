#include "dnlab/bessel.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "dnlab/errors.hpp"

namespace dnlab {

namespace {

// sum_{k>=0} (x/2)^{n+2k} / (k! (n+k)!), with sign (-1)^k for the J kind.
double ascending_series(int n, double x, bool alternating) {
  double term = 1.0;
  for (int m = 1; m <= n; ++m) term *= (x / 2.0) / m;
  double sum = term;
  const double q = x * x / 4.0;
  for (int k = 1; k <= 400; ++k) {
    term *= q / (static_cast<double>(k) * (n + k));
    const double contrib = alternating && (k % 2) ? -term : term;
    sum += contrib;
    if (std::abs(term) < 1e-18 * std::abs(sum) + 1e-300) break;
  }
  return sum;
}

// Miller downward recurrence for the whole family {B_0..B_n}, normalized
// by e^x = I_0 + 2 sum I_k (modified kind) or 1 = J_0 + 2 sum J_{2k}.
std::vector<double> miller(int n, double x, bool modified) {
  const int start = n + 16 + static_cast<int>(x);
  std::vector<double> b(start + 2, 0.0);
  b[start + 1] = 0.0;
  b[start] = 1e-300;
  for (int k = start; k >= 1; --k) {
    const double next = (modified ? 1.0 : -1.0) * b[k + 1] + (2.0 * k / x) * b[k];
    b[k - 1] = next;
    if (std::abs(b[k - 1]) > 1e250) {
      for (int m = k - 1; m <= start + 1; ++m) b[m] *= 1e-250;
    }
  }
  double norm = b[0];
  if (modified) {
    for (int k = 1; k <= start; ++k) norm += 2.0 * b[k];
    norm /= std::exp(x);
  } else {
    norm = b[0];
    for (int k = 2; k <= start; k += 2) norm += 2.0 * b[k];
  }
  b.resize(n + 2);
  for (double& v : b) v /= norm;
  return b;
}

double eval(int n, double x, bool modified) {
  if (n < 0) throw InputError("bessel: order must be >= 0");
  if (x < 0.0) throw InputError("bessel: argument must be >= 0");
  if (x == 0.0) return n == 0 ? 1.0 : 0.0;
  if (x <= 12.0) return ascending_series(n, x, /*alternating=*/!modified);
  return miller(n, x, modified)[n];
}

}  // namespace

double bessel_i(int n, double x) { return eval(n, x, /*modified=*/true); }

double bessel_j(int n, double x) { return eval(n, x, /*modified=*/false); }

double bessel_i_prime(int n, double x) {
  if (n == 0) return bessel_i(1, x);
  if (x == 0.0) return n == 1 ? 0.5 : 0.0;
  return 0.5 * (bessel_i(n - 1, x) + bessel_i(n + 1, x));
}

double bessel_j_prime(int n, double x) {
  if (n == 0) return -bessel_j(1, x);
  if (x == 0.0) return n == 1 ? 0.5 : 0.0;
  return 0.5 * (bessel_j(n - 1, x) - bessel_j(n + 1, x));
}

double bessel_j0_zero(int k) {
  if (k < 1) throw InputError("bessel_j0_zero: k must be >= 1");
  // McMahon expansion seed, then Newton; J0 zeros are simple and well
  // separated so this converges in a handful of steps.
  const double beta = (k - 0.25) * std::numbers::pi;
  double x = beta + 1.0 / (8.0 * beta) - 31.0 / (384.0 * beta * beta * beta);
  for (int it = 0; it < 60; ++it) {
    const double f = bessel_j(0, x);
    const double df = -bessel_j(1, x);
    const double step = f / df;
    x -= step;
    if (std::abs(step) < 1e-15 * x) break;
  }
  return x;
}

}  // namespace dnlab
