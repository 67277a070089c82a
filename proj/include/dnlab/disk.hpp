#pragma once

#include <array>
#include <functional>
#include <vector>

#include "dnlab/errors.hpp"

namespace dnlab {

/// Continuum unit-disk evaluator for the operator mapping boundary data
/// to the conormal data of the extension solving (1/2) Laplacian u = lambda u.
/// Closed forms are Bessel quotients on the Fourier modes.
struct DiskModel {
  double lambda = 0.0;
  int bessel_order_max = 16;
  int quad_radial = 256;
  int quad_angular = 256;
};

/// First eigenvalue of the Dirichlet Laplacian on the unit disk,
/// -j_{0,1}^2 (convention: full Laplacian, not half).
double first_dirichlet_eigenvalue();

/// Gauge threshold lambda_1^D / 2 below which E_x[e^{-lambda tau}] blows up.
double gauge_threshold();

/// Eigenvalue of the boundary operator on the Fourier mode e^{in theta}:
///   lambda > 0:  (s/2) I_n'(s)/I_n(s),  s = sqrt(2 lambda)
///   lambda = 0:  |n| / 2
///   lambda < 0:  (t/2) J_n'(t)/J_n(t),  t = sqrt(-2 lambda),
/// the last defined away from the Dirichlet resonances J_n(t) = 0.
double dn_eigenvalue(const DiskModel& model, int n);

/// Boundary energy
///   (1/16 pi) 2x-integral of (phi(a)-phi(b))^2 / sin^2((a-b)/2)
/// from uniform samples phi_k = phi(2 pi k / N). The diagonal is filled
/// with its limit 4 phi'(a)^2 (4th-order periodic differences), which
/// makes the double trapezoid rule exact for trigonometric polynomials.
/// Throws NumericError when the half-resolution check does not settle.
double douglas_energy(const std::vector<double>& phi_samples);

/// K(x, xi) = (1/2 pi) (1 - |x|^2)/|x - xi|^2 for |x| < 1 and a boundary
/// angle xi.
double poisson_kernel(const std::array<double, 2>& x, double xi_angle);

/// E_x[e^{-lambda tau}]: radial closed form I_0(s|x|)/I_0(s) for
/// lambda > 0, identically 1 at lambda = 0, and the J-quotient analogue for
/// gauge_threshold() < lambda < 0. Throws NotGaugeable at or below the
/// threshold.
double gauge(const DiskModel& model, const std::array<double, 2>& x);
double gauge_radial(const DiskModel& model, double r);

/// V_lambda = lambda * integral over the disk of K(x, xi) gauge(x) dx,
/// evaluated in polar coordinates centered at xi so the kernel's boundary
/// concentration integrates exactly; xi-independent by symmetry and equal
/// to the n = 0 boundary eigenvalue.
double v_lambda(const DiskModel& model);

/// Gauss-Legendre nodes/weights on [a, b].
void gauss_legendre(int n, double a, double b, std::vector<double>& nodes,
                    std::vector<double>& weights);

}  // namespace dnlab
