#include "dnlab/spectral.hpp"

#include <cmath>

#include <unsupported/Eigen/MatrixFunctions>

#include "dnlab/linalg.hpp"

namespace dnlab {

namespace {

// First nonzero component positive; the tie-break convention for
// eigenvector signs.
void fix_sign(Eigen::Ref<Vector> v) {
  const double scale = v.cwiseAbs().maxCoeff();
  for (int i = 0; i < v.size(); ++i) {
    if (std::abs(v[i]) > 1e-12 * scale) {
      if (v[i] < 0.0) v = -v;
      return;
    }
  }
}

}  // namespace

SpectralResult spectrum(const DnOperator& dn) {
  Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> es(
      0.5 * (dn.S + dn.S.transpose()), Matrix(dn.mu.asDiagonal()));
  if (es.info() != Eigen::Success)
    throw NumericError("spectrum: eigensolver failed");

  SpectralResult out;
  out.eigenvalues = es.eigenvalues();
  out.eigenvectors = es.eigenvectors();
  for (int c = 0; c < out.eigenvectors.cols(); ++c)
    fix_sign(out.eigenvectors.col(c));

  out.ground_state = out.eigenvectors.col(0);
  const int n = static_cast<int>(out.eigenvalues.size());
  if (n == 1) {
    out.simple = true;
  } else {
    const double scale =
        std::max(out.eigenvalues.cwiseAbs().maxCoeff(), 1e-300);
    const double gap = (out.eigenvalues[1] - out.eigenvalues[0]) / scale;
    if (gap > 1e-8)
      out.simple = true;
    else
      out.simple = std::nullopt;
  }
  return out;
}

ExcessiveResult is_alpha_excessive(const DnOperator& dn, const Vector& phi,
                                   double alpha, double rtol) {
  if (phi.size() != dn.S.rows())
    throw InputError("is_alpha_excessive: vector length mismatch");
  ExcessiveResult out;
  const double phi_scale = std::max(phi.cwiseAbs().maxCoeff(), 1e-300);
  if (phi.minCoeff() < -rtol * phi_scale) return out;  // not even nonnegative

  if (is_markovian(dn.S)) {
    out.method = ExcessiveCheck::generator;
    const Vector image = dn.N * phi + alpha * phi;
    const double scale =
        std::max(dn.N.cwiseAbs().maxCoeff() * phi_scale, 1e-300);
    out.excessive = image.minCoeff() >= -rtol * scale;
    return out;
  }

  // Positivity of the semigroup unknown: certify on the dyadic t-grid.
  out.method = ExcessiveCheck::grid_certified;
  for (int k = -20; k <= 6; ++k) {
    const double t = std::ldexp(1.0, k);
    const Vector moved = std::exp(-alpha * t) * (trace_semigroup(dn, t) * phi);
    if ((moved - phi).maxCoeff() > rtol * phi_scale) return out;
  }
  out.excessive = true;
  return out;
}

HTransform h_transform(const DnOperator& dn, const Vector& h, double alpha) {
  if (h.size() != dn.S.rows())
    throw InputError("h_transform: h length mismatch");
  const double hmax = h.maxCoeff();
  if (!(hmax > 0.0) || h.minCoeff() <= 1e-12 * hmax)
    throw NonPositiveH("h_transform: h must be strictly positive");

  HTransform out;
  out.h = h;
  out.alpha = alpha;
  Matrix shifted = dn.N;
  shifted.diagonal().array() += alpha;
  out.transformed_generator =
      h.cwiseInverse().asDiagonal() * shifted * h.asDiagonal();
  out.transformed_measure = h.array().square().matrix().cwiseProduct(dn.mu);
  return out;
}

TrichotomyResult trichotomy(const DnOperator& dn, const Vector& h,
                            double alpha) {
  if (!is_markovian(dn.S))
    throw NumericError(
        "trichotomy: base trace matrix is not positivity preserving");
  const auto exc = is_alpha_excessive(dn, h, alpha);
  if (!exc.excessive)
    throw NotExcessive("trichotomy: h is not alpha-excessive");

  const HTransform ht = h_transform(dn, h, alpha);
  const SpectralResult spec = spectrum(dn);
  const double lambda1 = spec.eigenvalues[0];
  const double scale = std::max(spec.eigenvalues.cwiseAbs().maxCoeff(), 1.0);

  TrichotomyResult out;
  out.irreducible = offdiagonal_connected(ht.transformed_generator);
  out.nonnegative = alpha >= -lambda1 - 1e-9 * scale;
  const double rowsum_worst =
      (ht.transformed_generator * Vector::Ones(h.size())).cwiseAbs().maxCoeff();
  out.recurrent = out.irreducible && rowsum_worst < 1e-9;

  // Theorem prediction: recurrence holds exactly for the ground-state pair.
  const Vector unit_h = h / std::sqrt(h.dot(dn.mu.cwiseProduct(h)));
  out.ground_state_characterization =
      std::abs(alpha + lambda1) <= 1e-9 * scale &&
      (unit_h - spec.ground_state).cwiseAbs().maxCoeff() < 1e-9;
  out.consistent = out.recurrent == out.ground_state_characterization;
  return out;
}

Matrix expm(const Matrix& m) { return m.exp(); }

Matrix trace_semigroup(const DnOperator& dn, double t) {
  return expm(Matrix(-t * dn.N));
}

}  // namespace dnlab
