#include "dnlab/dn.hpp"

#include <iomanip>
#include <sstream>

#include "dnlab/linalg.hpp"

namespace dnlab {

DnOperator dn_operator(const FormSpec& form) {
  DnOperator dn;
  dn.boundary_ids = form.boundary_ids();
  dn.mu = form.boundary_measure();
  dn.S = schur_complement(form.energy_matrix(), form.boundary_idx(),
                          form.interior_idx());
  dn.N = dn.mu.cwiseInverse().asDiagonal() * dn.S;
  return dn;
}

BeurlingDenyData beurling_deny(const DnOperator& dn, double rtol) {
  if (!is_markovian(dn.S, rtol)) {
    double worst = 0.0;
    for (int i = 0; i < dn.S.rows(); ++i)
      for (int j = 0; j < dn.S.cols(); ++j)
        if (i != j) worst = std::max(worst, dn.S(i, j));
    std::ostringstream msg;
    msg << "trace matrix has positive off-diagonal (worst " << worst << ")";
    throw NotMarkovian(msg.str());
  }
  BeurlingDenyData bd;
  bd.jump_kernel = (-dn.S).cwiseMax(0.0);
  bd.jump_kernel.diagonal().setZero();
  bd.killing_vector = dn.S.rowwise().sum();
  return bd;
}

std::string matrix_csv(const Matrix& m, const std::vector<std::string>& ids) {
  std::ostringstream out;
  out << std::setprecision(17);
  for (std::size_t i = 0; i < ids.size(); ++i)
    out << (i ? "," : "") << ids[i];
  out << "\n";
  for (int r = 0; r < m.rows(); ++r) {
    for (int c = 0; c < m.cols(); ++c) out << (c ? "," : "") << m(r, c);
    out << "\n";
  }
  return out.str();
}

}  // namespace dnlab
