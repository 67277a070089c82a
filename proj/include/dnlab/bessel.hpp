#pragma once

namespace dnlab {

/// Modified Bessel function of the first kind I_n(x), n >= 0, x >= 0.
/// Power series for x <= 12, normalized downward recurrence beyond;
/// 1e-12 relative accuracy target, validated against the three-term
/// recurrence I_{n-1}(x) - I_{n+1}(x) = (2n/x) I_n(x).
double bessel_i(int n, double x);

/// d/dx I_n(x).
double bessel_i_prime(int n, double x);

/// Bessel function of the first kind J_n(x), n >= 0, x >= 0.
double bessel_j(int n, double x);

/// d/dx J_n(x).
double bessel_j_prime(int n, double x);

/// k-th positive zero of J_0 (k >= 1), by bracketed Newton refinement.
double bessel_j0_zero(int k);

}  // namespace dnlab
