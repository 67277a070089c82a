#include "dnlab/linalg.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

namespace dnlab {

SymSolver::SymSolver(const Matrix& m, double rtol) : rtol_(rtol) {
  if (m.rows() == 0) {
    empty_ = true;
    return;
  }
  es_.compute(0.5 * (m + m.transpose()));
  const Vector abs_eigs = es_.eigenvalues().cwiseAbs();
  min_abs_ = abs_eigs.minCoeff();
  max_abs_ = abs_eigs.maxCoeff();
  singular_ = (max_abs_ == 0.0) || (min_abs_ < rtol_ * max_abs_);
}

double SymSolver::margin() const {
  if (empty_) return 1.0;
  return max_abs_ > 0.0 ? min_abs_ / max_abs_ : 0.0;
}

void SymSolver::require_invertible() const {
  if (singular_) {
    std::ostringstream msg;
    msg << "interior block is singular: |eigenvalue| margin " << margin()
        << " below cutoff " << rtol_;
    throw SingularInterior(msg.str());
  }
}

Vector SymSolver::solve(const Vector& b) const {
  if (empty_) return Vector(0);
  require_invertible();
  return es_.eigenvectors() *
         (es_.eigenvalues().cwiseInverse().asDiagonal() *
          (es_.eigenvectors().transpose() * b));
}

Matrix SymSolver::solve(const Matrix& b) const {
  if (empty_) return Matrix(0, b.cols());
  require_invertible();
  return es_.eigenvectors() *
         (es_.eigenvalues().cwiseInverse().asDiagonal() *
          (es_.eigenvectors().transpose() * b));
}

Matrix submatrix(const Matrix& m, const std::vector<int>& rows,
                 const std::vector<int>& cols) {
  Matrix out(rows.size(), cols.size());
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < cols.size(); ++c)
      out(r, c) = m(rows[r], cols[c]);
  return out;
}

Matrix schur_complement(const Matrix& m, const std::vector<int>& keep,
                        const std::vector<int>& drop, double rtol) {
  const Matrix m_kk = submatrix(m, keep, keep);
  if (drop.empty()) return m_kk;
  const Matrix m_kd = submatrix(m, keep, drop);
  const Matrix m_dd = submatrix(m, drop, drop);
  SymSolver solver(m_dd, rtol);
  Matrix s = m_kk - m_kd * solver.solve(Matrix(m_kd.transpose()));
  return 0.5 * (s + s.transpose());
}

bool is_dirichlet_matrix(const Matrix& m, double rtol) {
  const double scale = std::max(m.cwiseAbs().maxCoeff(), 1e-300);
  const double tol = rtol * scale;
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j)
      if (i != j && m(i, j) > tol) return false;
    if (m.row(i).sum() < -tol) return false;
  }
  return true;
}

bool offdiagonal_connected(const Matrix& m, double rtol) {
  const int n = static_cast<int>(m.rows());
  if (n <= 1) return true;
  double scale = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) scale = std::max(scale, std::abs(m(i, j)));
  const double tol = rtol * std::max(scale, 1e-300);

  std::vector<int> stack = {0};
  std::vector<bool> seen(n, false);
  seen[0] = true;
  int reached = 1;
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    for (int w = 0; w < n; ++w) {
      if (w != v && !seen[w] && std::abs(m(v, w)) > tol) {
        seen[w] = true;
        ++reached;
        stack.push_back(w);
      }
    }
  }
  return reached == n;
}

}  // namespace dnlab
