#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dnlab/forms.hpp"
#include "dnlab/perturbation.hpp"
#include "dnlab/rng.hpp"

namespace dnlab {

/// Random connected weighted graph with boundary, for property sweeps.
/// Spanning tree plus extra (possibly long-range) edges; at least one
/// interior vertex, at least two boundary vertices.
struct RandomFormOptions {
  int min_vertices = 4;
  int max_vertices = 10;
  double extra_edge_prob = 0.35;
  bool with_kill = false;
};
FormSpec random_connected_form(CounterRng& rng,
                               const RandomFormOptions& opts = {});

/// Random signed potential on a form. Constraints shrink the negative
/// part until the requested hypothesis holds, which always terminates
/// because kappa- = 0 satisfies both.
struct RandomPotentialOptions {
  bool boundary_only = false;
  bool interior_only = false;
  /// Shrink kappa- until the perturbed interior block is clear of 0.
  bool ensure_threshold = true;
  /// Shrink kappa- until the perturbed interior block is PSD.
  bool ensure_interior_positivity = false;
};
SignedPotential random_signed_potential(CounterRng& rng, const FormSpec& form,
                                        const RandomPotentialOptions& opts = {});

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

/// Deterministic identity battery for one fixture: decomposition,
/// Schur/energy consistency, Markovianity, Beurling-Deny reconstruction,
/// two-stage elimination, and (with kappa) the perturbed-trace identities,
/// positivity preservation, spectral ground state and trichotomy, plus
/// exact boundary recovery for boundary-supported kappa.
std::vector<CheckResult> fixture_checks(const FormSpec& form,
                                        const SignedPotential* kappa,
                                        const Matrix* expected_S,
                                        std::uint64_t seed);

/// Randomized sweeps behind the structural theorems: positivity
/// preservation, the perturbed form representation, Perron ground states
/// and the recurrence trichotomy.
std::vector<CheckResult> random_theorem_battery(std::uint64_t seed,
                                                int instances);

/// Unit-disk closed-form identities (Fourier eigenvalues, Douglas energy,
/// gauge and V_lambda cross-checks).
std::vector<CheckResult> disk_identity_checks();

}  // namespace dnlab
