#pragma once

#include <Eigen/Dense>
#include <vector>

#include "dnlab/errors.hpp"

namespace dnlab {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Symmetric solver with the spectral singularity cutoff used everywhere
/// for interior blocks: the block counts as singular when its smallest
/// |eigenvalue| is below rtol x largest |eigenvalue|.
class SymSolver {
 public:
  explicit SymSolver(const Matrix& m, double rtol = 1e-10);

  bool singular() const { return singular_; }
  double min_abs_eigenvalue() const { return min_abs_; }
  double max_abs_eigenvalue() const { return max_abs_; }
  /// Margin |lambda|_min / |lambda|_max for threshold diagnostics.
  double margin() const;

  /// Throws SingularInterior when singular().
  Vector solve(const Vector& b) const;
  Matrix solve(const Matrix& b) const;

 private:
  void require_invertible() const;
  Eigen::SelfAdjointEigenSolver<Matrix> es_;
  double min_abs_ = 0.0;
  double max_abs_ = 0.0;
  double rtol_;
  bool singular_ = false;
  bool empty_ = false;
};

/// Submatrix m(rows, cols).
Matrix submatrix(const Matrix& m, const std::vector<int>& rows,
                 const std::vector<int>& cols);

/// Schur complement of `m` onto `keep` after eliminating `drop`:
/// m_kk - m_kd m_dd^{-1} m_dk, symmetrized against roundoff.
/// Throws SingularInterior when the dropped block is singular.
Matrix schur_complement(const Matrix& m, const std::vector<int>& keep,
                        const std::vector<int>& drop, double rtol = 1e-10);

/// Off-diagonal <= 0 and row sums >= 0 (both up to rtol x scale):
/// the sign pattern of a sub-Markovian generator matrix.
bool is_dirichlet_matrix(const Matrix& m, double rtol = 1e-10);

/// Connectivity of {i ~ j : |m_ij| > tol}, with tol relative to the
/// largest |off-diagonal| entry.
bool offdiagonal_connected(const Matrix& m, double rtol = 1e-12);

}  // namespace dnlab
