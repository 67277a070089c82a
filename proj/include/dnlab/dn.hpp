#pragma once

#include <string>

#include "dnlab/forms.hpp"

namespace dnlab {

/// Boundary realization of a (possibly perturbed) form:
///  - S is the trace-form matrix, phi . S . psi = E(ext(phi), ext(psi))
///    with ext the energy-orthogonal extension;
///  - N = diag(mu)^{-1} S is the operator generating the trace semigroup
///    e^{-tN} on L^2(F, mu).
/// S is symmetric; N is self-adjoint on L^2(F, mu).
struct DnOperator {
  std::vector<std::string> boundary_ids;
  Matrix S;
  Matrix N;
  Vector mu;
};

/// Schur complement of the energy matrix onto the boundary:
/// S = A_FF - A_FG A_GG^{-1} A_GF, N = diag(mu)^{-1} S.
DnOperator dn_operator(const FormSpec& form);

/// Jump kernel and killing vector reconstructing a Markovian trace matrix:
/// S phi . phi = 1/2 sum_{i!=j} (phi_i - phi_j)^2 J_ij + sum_i phi_i^2 kcheck_i
/// with J_ij = -S_ij (i != j) and kcheck_i = sum_j S_ij.
struct BeurlingDenyData {
  Matrix jump_kernel;
  Vector killing_vector;
};

/// Throws NotMarkovian when S has an off-diagonal entry above tolerance.
BeurlingDenyData beurling_deny(const DnOperator& dn, double rtol = 1e-10);

/// CSV with a header row of boundary ids; used by the CLI matrix export.
std::string matrix_csv(const Matrix& m, const std::vector<std::string>& ids);

}  // namespace dnlab
