#pragma once

#include <vector>

#include "dnlab/dn.hpp"
#include "dnlab/forms.hpp"

namespace dnlab {

/// Signed vertex measure kappa = kappa_plus - kappa_minus with mutually
/// singular parts (kappa_plus_i * kappa_minus_i = 0; violations are
/// rejected, not repaired).
class SignedPotential {
 public:
  SignedPotential(Vector kappa_plus, Vector kappa_minus);

  static SignedPotential zero(int n);
  /// Split a signed vector into its positive/negative parts.
  static SignedPotential from_signed(const Vector& kappa);
  /// Parse {"plus":{id:val},"minus":{id:val}} against the form's vertices.
  static SignedPotential from_json(const FormSpec& form,
                                   const std::string& text);
  static SignedPotential from_json_file(const FormSpec& form,
                                        const std::string& path);

  const Vector& plus() const { return plus_; }
  const Vector& minus() const { return minus_; }
  Vector signed_vector() const { return plus_ - minus_; }
  Vector total_variation() const { return plus_ + minus_; }
  int size() const { return static_cast<int>(plus_.size()); }
  bool is_zero() const;
  /// True when |kappa| vanishes on the interior of the given form.
  bool boundary_supported(const FormSpec& form, double tol = 0.0) const;

 private:
  Vector plus_;
  Vector minus_;
};

/// Energy matrix of the perturbed form: A + diag(kappa+) - diag(kappa-).
Matrix perturbed_form(const FormSpec& form, const SignedPotential& kappa);

/// Certificate of the form bound
///   u . diag(kappa-) . u <= delta * u.(A + diag(kappa+)).u + c_delta * u.M.u
/// over all vectors, or over the kappa-harmonic subspace when
/// restricted_to_trace. delta < 1 certifies lower-bounded closedness.
struct BoundCertificate {
  double delta = 0.0;
  double c_delta = 0.0;
  /// The grid value C at which delta was attained (c_delta = delta * C).
  double c_reference = 0.0;
  bool restricted_to_trace = false;
  /// (C, delta(C)) for every grid entry; delta(C) is nonincreasing in C,
  /// +inf marks a degenerate pencil at that C.
  std::vector<std::pair<double, double>> grid;
};

std::vector<double> default_c_grid();

/// delta(C) = largest generalized eigenvalue of diag(kappa-) against
/// (A + diag(kappa+) + C diag(m)); the certificate keeps the smallest
/// delta over the grid. Throws NumericError when the pencil is
/// degenerate at every grid point.
BoundCertificate form_bound(const FormSpec& form, const SignedPotential& kappa,
                            const std::vector<double>& c_grid = default_c_grid());

/// Same pencil restricted to the kappa-harmonic subspace spanned by the
/// kappa-harmonic extensions of the boundary coordinate vectors.
BoundCertificate form_bound_on_trace(
    const FormSpec& form, const SignedPotential& kappa,
    const std::vector<double>& c_grid = default_c_grid());

/// Zero-spectrum test for the perturbed interior block, the hypothesis
/// under which the perturbed decomposition (and hence the kappa-harmonic
/// extension) is unique.
struct DecompositionThreshold {
  bool passes = false;
  double min_abs_eigenvalue = 0.0;
  double spectral_radius = 0.0;
  /// min/max |eigenvalue| ratio; instances with margin below 100x the
  /// cutoff are flagged near-threshold.
  double margin = 0.0;
  bool near_threshold = false;
};
DecompositionThreshold decomposition_threshold(const FormSpec& form,
                                               const SignedPotential& kappa);

/// Unique extension u with u|F = phi and ((A + diag(kappa)) u)|G = 0.
Vector kappa_harmonic_extension(const FormSpec& form,
                                const SignedPotential& kappa,
                                const Vector& phi);

/// Schur complement of the perturbed energy matrix onto the boundary.
/// For boundary-supported kappa this equals S0 + diag(kappa|F).
DnOperator perturbed_dn(const FormSpec& form, const SignedPotential& kappa);

/// True iff the perturbed interior block is positive semidefinite
/// (the finite form of the generator/form positivity equivalences).
bool interior_positivity(const FormSpec& form, const SignedPotential& kappa,
                         double rtol = 1e-12);

/// Sign test on the perturbed trace matrix; predicted true whenever
/// interior_positivity holds, so a false return under that hypothesis is
/// a theorem counterexample candidate.
bool trace_positivity_preserving(const FormSpec& form,
                                 const SignedPotential& kappa,
                                 double rtol = 1e-10);

/// Discrete form representation checks for the perturbed trace form:
///  (i)   resolvent identity  H phi - H^k phi - G_G(diag(kappa) H^k phi) = 0
///  (ii)  S_k = S0 + P with  P_{bc} = sum_i kappa_i (H^k e_b)_i (H e_c)_i
///  (iii) P symmetric
///  (iv)  phi.S_k.phi = 1/2 sum_{i!=j}(phi_i-phi_j)^2 (J0 - J_P)_ij
///                      + sum_i phi_i^2 (kcheck0 + V)_i,  V = row sums of P.
/// Residuals are relative to the matrix scales involved.
struct PerturbedTraceReport {
  Matrix perturbation_matrix;  // P
  Vector killing_change;       // V, row sums of P
  double resolvent_residual = 0.0;
  double split_residual = 0.0;
  double symmetry_residual = 0.0;
  double rearrangement_residual = 0.0;
  bool pass = false;
};
PerturbedTraceReport verify_perturbed_trace_identity(
    const FormSpec& form, const SignedPotential& kappa, double rtol = 1e-10);

/// Exact boundary recovery: for boundary-supported perturbations the DN
/// difference is diagonal and recovers kappa|F.
struct BoundaryRecovery {
  Vector kappa_on_boundary;
  double offdiagonal_residual = 0.0;
};
/// Throws NonDiagonalDifference when the difference has off-diagonal mass
/// above tolerance (interior-supported perturbation).
BoundaryRecovery calderon_boundary_recover(const DnOperator& dn_perturbed,
                                           const DnOperator& dn_base,
                                           double rtol = 1e-10);

}  // namespace dnlab
