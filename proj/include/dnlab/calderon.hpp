#pragma once

#include "dnlab/dn.hpp"
#include "dnlab/forms.hpp"
#include "dnlab/perturbation.hpp"

namespace dnlab {

/// Recovery of an interior potential from a measured DN matrix on a known
/// base form. Boundary-supported perturbations never need this machinery:
/// they are read off exactly from the diagonal of the DN difference.
struct InverseProblem {
  FormSpec base;
  Matrix observed_S;
  std::vector<int> unknown_support;  // interior vertex indices
  double regularization = 0.0;

  InverseProblem(FormSpec base_form, Matrix observed,
                 std::vector<int> support, double reg = 0.0);
};

/// DN matrix of the base form perturbed by the interior potential V
/// (full-length vector vanishing on the boundary).
DnOperator forward_map(const FormSpec& base, const Vector& v_interior);

/// Derivative of the DN matrix in the potential directions: column g is
/// vec(h_g h_g^T) where h_g collects the values of the V-harmonic basis
/// extensions at the support vertex g. Verified against finite
/// differences in the tests.
Matrix dn_jacobian(const FormSpec& base, const Vector& v_interior,
                   const std::vector<int>& support);

/// Discrete residual of the Cauchy-data integral identity:
/// sum over interior of (V1 - V2) (H^{V1} phi)(H^{V2} phi), which equals
/// phi.(S_{V1} - S_{V2}).phi and so vanishes when the DN data coincide.
double integral_identity_residual(const FormSpec& base, const Vector& v1,
                                  const Vector& v2, const Vector& phi);

struct RecoveryResult {
  Vector potential_estimate;  // on unknown_support, in that order
  double residual_norm = 0.0;
  double gradient_norm = 0.0;
  int iterations = 0;
  bool converged = false;
  /// Numerical rank of the Jacobian at the solution; a deficit flags
  /// non-uniqueness that the theory does not rule out on graphs.
  int jacobian_rank = 0;
};

/// Gauss-Newton on ||S_V - S_obs||_F^2 + reg ||V - init||^2 with
/// step-halving; converged when the gradient norm drops below tol.
RecoveryResult recover_interior(const InverseProblem& problem,
                                const Vector& init, int max_iter = 100,
                                double tol = 1e-12);

}  // namespace dnlab
