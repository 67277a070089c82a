#include "dnlab/calderon.hpp"

#include <algorithm>
#include <cmath>

#include "dnlab/linalg.hpp"

namespace dnlab {

InverseProblem::InverseProblem(FormSpec base_form, Matrix observed,
                               std::vector<int> support, double reg)
    : base(std::move(base_form)),
      observed_S(std::move(observed)),
      unknown_support(std::move(support)),
      regularization(reg) {
  if (observed_S.rows() != base.n_boundary() ||
      observed_S.cols() != base.n_boundary())
    throw InputError("InverseProblem: observed DN dimensions do not match "
                     "the base boundary");
  for (int g : unknown_support)
    if (g < 0 || g >= base.size() || base.is_boundary(g))
      throw InputError("InverseProblem: support must consist of interior "
                       "vertices");
  if (regularization < 0.0)
    throw InputError("InverseProblem: regularization must be >= 0");
}

namespace {

Vector embed(const FormSpec& base, const std::vector<int>& support,
             const Vector& values) {
  Vector full = Vector::Zero(base.size());
  for (std::size_t k = 0; k < support.size(); ++k)
    full[support[k]] = values[k];
  return full;
}

}  // namespace

DnOperator forward_map(const FormSpec& base, const Vector& v_interior) {
  if (v_interior.size() != base.size())
    throw InputError("forward_map: potential length mismatch");
  for (int b : base.boundary_idx())
    if (v_interior[b] != 0.0)
      throw InputError("forward_map: potential must vanish on the boundary");
  return perturbed_dn(base, SignedPotential::from_signed(v_interior));
}

Matrix dn_jacobian(const FormSpec& base, const Vector& v_interior,
                   const std::vector<int>& support) {
  const auto& F = base.boundary_idx();
  const auto& G = base.interior_idx();
  const int nf = base.n_boundary();

  Matrix a = base.energy_matrix();
  a.diagonal() += v_interior;
  SymSolver interior(submatrix(a, G, G));
  // Interior values of the V-harmonic basis extensions, one column per
  // boundary vertex: ext_G = -B^{-1} A_GF.
  const Matrix ext = -interior.solve(submatrix(a, G, F));

  Matrix jac(nf * nf, support.size());
  for (std::size_t c = 0; c < support.size(); ++c) {
    const auto pos = std::find(G.begin(), G.end(), support[c]) - G.begin();
    const Vector h = ext.row(pos).transpose();
    const Matrix outer = h * h.transpose();
    jac.col(c) = Eigen::Map<const Vector>(outer.data(), nf * nf);
  }
  return jac;
}

double integral_identity_residual(const FormSpec& base, const Vector& v1,
                                  const Vector& v2, const Vector& phi) {
  const Vector u1 =
      kappa_harmonic_extension(base, SignedPotential::from_signed(v1), phi);
  const Vector u2 =
      kappa_harmonic_extension(base, SignedPotential::from_signed(v2), phi);
  double sum = 0.0;
  for (int g : base.interior_idx()) sum += (v1[g] - v2[g]) * u1[g] * u2[g];
  return sum;
}

RecoveryResult recover_interior(const InverseProblem& problem,
                                const Vector& init, int max_iter, double tol) {
  const auto& support = problem.unknown_support;
  const int k = static_cast<int>(support.size());
  if (init.size() != k)
    throw InputError("recover_interior: init length must match support size");
  const int nf = problem.base.n_boundary();
  const int budget = nf * (nf + 1) / 2;
  if (k > budget)
    // More unknowns than independent DN entries; proceed, the rank report
    // will expose the deficiency.
    std::fprintf(stderr,
                 "recover_interior: %d unknowns exceed the identifiability "
                 "budget %d\n",
                 k, budget);

  const auto misfit = [&](const Vector& v) {
    const DnOperator dn =
        forward_map(problem.base, embed(problem.base, support, v));
    const Matrix diff = dn.S - problem.observed_S;
    return std::make_pair(
        0.5 * diff.squaredNorm() +
            0.5 * problem.regularization * (v - init).squaredNorm(),
        diff);
  };

  RecoveryResult out;
  Vector v = init;
  auto [fval, diff] = misfit(v);

  for (out.iterations = 0; out.iterations < max_iter; ++out.iterations) {
    const Matrix jac =
        dn_jacobian(problem.base, embed(problem.base, support, v), support);
    const Vector r = Eigen::Map<const Vector>(diff.data(), diff.size());
    Vector grad = jac.transpose() * r;
    if (problem.regularization > 0.0)
      grad += problem.regularization * (v - init);
    out.gradient_norm = grad.norm();
    if (out.gradient_norm < tol) {
      out.converged = true;
      break;
    }

    Matrix normal = jac.transpose() * jac;
    normal.diagonal().array() += problem.regularization;
    // Tiny Levenberg floor keeps rank-deficient steps finite.
    normal.diagonal().array() += 1e-14 * std::max(normal.trace(), 1.0);
    const Vector step = normal.ldlt().solve(-grad);

    double scale = 1.0;
    bool accepted = false;
    for (int halving = 0; halving < 40; ++halving) {
      const Vector trial = v + scale * step;
      try {
        auto [f_trial, d_trial] = misfit(trial);
        if (f_trial <= fval) {
          v = trial;
          fval = f_trial;
          diff = d_trial;
          accepted = true;
          break;
        }
      } catch (const SingularInterior&) {
        // Step crossed the decomposition threshold; shrink and retry.
      }
      scale *= 0.5;
    }
    if (!accepted) break;
  }

  out.potential_estimate = v;
  out.residual_norm = diff.norm();
  const Matrix jac =
      dn_jacobian(problem.base, embed(problem.base, support, v), support);
  const auto svd = jac.jacobiSvd();
  const double smax = svd.singularValues().size()
                          ? svd.singularValues().maxCoeff()
                          : 0.0;
  out.jacobian_rank = 0;
  for (int i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()[i] > 1e-10 * std::max(smax, 1e-300))
      ++out.jacobian_rank;
  if (!out.converged) {
    const Vector r = Eigen::Map<const Vector>(diff.data(), diff.size());
    Vector grad = jac.transpose() * r;
    if (problem.regularization > 0.0)
      grad += problem.regularization * (v - init);
    out.gradient_norm = grad.norm();
    out.converged = out.gradient_norm < tol;
  }
  return out;
}

}  // namespace dnlab
