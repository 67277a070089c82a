#include "dnlab/perturbation.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <nlohmann/json.hpp>

#include "dnlab/linalg.hpp"

namespace dnlab {

SignedPotential::SignedPotential(Vector kappa_plus, Vector kappa_minus)
    : plus_(std::move(kappa_plus)), minus_(std::move(kappa_minus)) {
  if (plus_.size() != minus_.size())
    throw InputError("kappa: plus/minus length mismatch");
  for (int i = 0; i < plus_.size(); ++i) {
    if (!(plus_[i] >= 0.0) || !(minus_[i] >= 0.0))
      throw InputError("kappa: parts must be nonnegative (vertex " +
                       std::to_string(i) + ")");
    if (plus_[i] > 0.0 && minus_[i] > 0.0)
      throw InputError(
          "kappa: plus and minus parts must have disjoint support (vertex " +
          std::to_string(i) + ")");
  }
}

SignedPotential SignedPotential::zero(int n) {
  return SignedPotential(Vector::Zero(n), Vector::Zero(n));
}

SignedPotential SignedPotential::from_signed(const Vector& kappa) {
  return SignedPotential(kappa.cwiseMax(0.0), (-kappa).cwiseMax(0.0));
}

SignedPotential SignedPotential::from_json(const FormSpec& form,
                                           const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(std::string("invalid kappa JSON: ") + e.what());
  }
  if (!j.is_object()) throw InputError("kappa: expected a JSON object");
  Vector plus = Vector::Zero(form.size());
  Vector minus = Vector::Zero(form.size());
  for (const char* part : {"plus", "minus"}) {
    if (!j.contains(part)) continue;
    if (!j[part].is_object())
      throw InputError(std::string("kappa.") + part +
                       ": expected an object {id: value}");
    for (const auto& [id, val] : j[part].items()) {
      if (!val.is_number())
        throw InputError(std::string("kappa.") + part + "." + id +
                         ": expected a number");
      (part[0] == 'p' ? plus : minus)[form.index_of(id)] = val.get<double>();
    }
  }
  return SignedPotential(std::move(plus), std::move(minus));
}

SignedPotential SignedPotential::from_json_file(const FormSpec& form,
                                                const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_json(form, buf.str());
}

bool SignedPotential::is_zero() const {
  return plus_.isZero(0.0) && minus_.isZero(0.0);
}

bool SignedPotential::boundary_supported(const FormSpec& form,
                                         double tol) const {
  for (int g : form.interior_idx())
    if (std::abs(plus_[g]) > tol || std::abs(minus_[g]) > tol) return false;
  return true;
}

Matrix perturbed_form(const FormSpec& form, const SignedPotential& kappa) {
  if (kappa.size() != form.size())
    throw InputError("kappa length does not match vertex count");
  Matrix a = form.energy_matrix();
  a.diagonal() += kappa.signed_vector();
  return a;
}

std::vector<double> default_c_grid() {
  return {0.0, 1e-2, 1e-1, 1.0, 10.0, 1e2, 1e3, 1e4};
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Largest generalized eigenvalue of the PSD pencil (num, den):
//   sup { u.num.u / u.den.u : u.den.u > 0 },
// computed by whitening den on its numerical range. Returns +inf when num
// does not vanish on the kernel of den (the degenerate case).
double pencil_sup(const Matrix& num, const Matrix& den) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(den);
  const double scale = es.eigenvalues().cwiseAbs().maxCoeff();
  if (scale == 0.0) return num.cwiseAbs().maxCoeff() > 0.0 ? kInf : 0.0;
  const double cut = 1e-12 * scale;

  std::vector<int> range;
  for (int i = 0; i < den.rows(); ++i)
    if (es.eigenvalues()[i] > cut) range.push_back(i);

  const int null_dim = static_cast<int>(den.rows() - range.size());
  if (null_dim > 0) {
    Matrix kernel(den.rows(), null_dim);
    int c = 0;
    for (int i = 0; i < den.rows(); ++i)
      if (es.eigenvalues()[i] <= cut) kernel.col(c++) = es.eigenvectors().col(i);
    const double leak = (kernel.transpose() * num * kernel).cwiseAbs().maxCoeff();
    if (leak > 1e-12 * std::max(num.cwiseAbs().maxCoeff(), 1.0)) return kInf;
  }
  if (range.empty()) return 0.0;

  Matrix basis(den.rows(), range.size());
  Vector inv_sqrt(range.size());
  for (std::size_t c = 0; c < range.size(); ++c) {
    basis.col(c) = es.eigenvectors().col(range[c]);
    inv_sqrt[c] = 1.0 / std::sqrt(es.eigenvalues()[range[c]]);
  }
  const Matrix reduced = inv_sqrt.asDiagonal() *
                         (basis.transpose() * num * basis) *
                         inv_sqrt.asDiagonal();
  Eigen::SelfAdjointEigenSolver<Matrix> red(0.5 * (reduced + reduced.transpose()));
  return std::max(0.0, red.eigenvalues().maxCoeff());
}

BoundCertificate best_over_grid(const Matrix& num_full, const Matrix& den_base,
                                const Matrix& mass,
                                const std::vector<double>& c_grid,
                                bool restricted) {
  BoundCertificate cert;
  cert.restricted_to_trace = restricted;
  cert.delta = kInf;
  for (double c : c_grid) {
    const double d = pencil_sup(num_full, den_base + c * mass);
    cert.grid.emplace_back(c, d);
    if (d < cert.delta) {
      cert.delta = d;
      cert.c_reference = c;
    }
  }
  if (!std::isfinite(cert.delta))
    throw NumericError(
        "form bound: degenerate pencil at every grid value of C "
        "(kappa- charges the kernel of the shifted form)");
  cert.c_delta = cert.delta * cert.c_reference;
  return cert;
}

}  // namespace

BoundCertificate form_bound(const FormSpec& form, const SignedPotential& kappa,
                            const std::vector<double>& c_grid) {
  if (kappa.size() != form.size())
    throw InputError("kappa length does not match vertex count");
  if (c_grid.empty()) throw InputError("form_bound: empty C grid");
  const Matrix num = Matrix(kappa.minus().asDiagonal());
  Matrix den = form.energy_matrix();
  den.diagonal() += kappa.plus();
  return best_over_grid(num, den, Matrix(form.measure().asDiagonal()), c_grid,
                        /*restricted=*/false);
}

BoundCertificate form_bound_on_trace(const FormSpec& form,
                                     const SignedPotential& kappa,
                                     const std::vector<double>& c_grid) {
  if (c_grid.empty()) throw InputError("form_bound: empty C grid");
  const auto threshold = decomposition_threshold(form, kappa);
  if (!threshold.passes)
    throw SingularInterior(
        "form_bound_on_trace: kappa-harmonic subspace undefined (perturbed "
        "interior block singular)");

  // Basis of the kappa-harmonic subspace: extensions of coordinate vectors.
  const int nf = form.n_boundary();
  Matrix basis(form.size(), nf);
  for (int b = 0; b < nf; ++b)
    basis.col(b) = kappa_harmonic_extension(form, kappa, Vector::Unit(nf, b));

  const Matrix num = basis.transpose() *
                     kappa.minus().asDiagonal() * basis;
  Matrix den_full = form.energy_matrix();
  den_full.diagonal() += kappa.plus();
  const Matrix den = basis.transpose() * den_full * basis;
  const Matrix mass =
      basis.transpose() * form.measure().asDiagonal() * basis;
  return best_over_grid(0.5 * (num + num.transpose()),
                        0.5 * (den + den.transpose()),
                        0.5 * (mass + mass.transpose()), c_grid,
                        /*restricted=*/true);
}

DecompositionThreshold decomposition_threshold(const FormSpec& form,
                                               const SignedPotential& kappa) {
  DecompositionThreshold out;
  const auto& G = form.interior_idx();
  if (G.empty()) {
    out.passes = true;
    out.margin = 1.0;
    out.near_threshold = false;
    return out;
  }
  const Matrix block = submatrix(perturbed_form(form, kappa), G, G);
  SymSolver solver(block);
  out.min_abs_eigenvalue = solver.min_abs_eigenvalue();
  out.spectral_radius = solver.max_abs_eigenvalue();
  out.margin = solver.margin();
  out.passes = !solver.singular();
  out.near_threshold = out.passes && out.margin < 1e-8;
  return out;
}

Vector kappa_harmonic_extension(const FormSpec& form,
                                const SignedPotential& kappa,
                                const Vector& phi) {
  if (phi.size() != form.n_boundary())
    throw InputError("kappa_harmonic_extension: boundary data length mismatch");
  const Matrix a = perturbed_form(form, kappa);
  const auto& F = form.boundary_idx();
  const auto& G = form.interior_idx();
  Vector u = Vector::Zero(form.size());
  for (int b = 0; b < form.n_boundary(); ++b) u[F[b]] = phi[b];
  if (!G.empty()) {
    SymSolver interior(submatrix(a, G, G));
    const Vector ug = interior.solve(Vector(-submatrix(a, G, F) * phi));
    for (std::size_t g = 0; g < G.size(); ++g) u[G[g]] = ug[g];
  }
  return u;
}

DnOperator perturbed_dn(const FormSpec& form, const SignedPotential& kappa) {
  DnOperator dn;
  dn.boundary_ids = form.boundary_ids();
  dn.mu = form.boundary_measure();
  dn.S = schur_complement(perturbed_form(form, kappa), form.boundary_idx(),
                          form.interior_idx());
  dn.N = dn.mu.cwiseInverse().asDiagonal() * dn.S;
  return dn;
}

bool interior_positivity(const FormSpec& form, const SignedPotential& kappa,
                         double rtol) {
  const auto& G = form.interior_idx();
  if (G.empty()) return true;
  const Matrix block = submatrix(perturbed_form(form, kappa), G, G);
  Eigen::SelfAdjointEigenSolver<Matrix> es(block);
  const double scale =
      std::max(es.eigenvalues().cwiseAbs().maxCoeff(), 1e-300);
  return es.eigenvalues().minCoeff() >= -rtol * scale;
}

bool trace_positivity_preserving(const FormSpec& form,
                                 const SignedPotential& kappa, double rtol) {
  return is_markovian(perturbed_dn(form, kappa).S, rtol);
}

PerturbedTraceReport verify_perturbed_trace_identity(
    const FormSpec& form, const SignedPotential& kappa, double rtol) {
  const auto& F = form.boundary_idx();
  const auto& G = form.interior_idx();
  const int nf = form.n_boundary();
  const int n = form.size();

  const DnOperator base = dn_operator(form);
  const DnOperator pert = perturbed_dn(form, kappa);
  const Vector kv = kappa.signed_vector();

  // Harmonic and kappa-harmonic extensions of the boundary basis.
  Matrix ext0(n, nf), extk(n, nf);
  for (int b = 0; b < nf; ++b) {
    ext0.col(b) = harmonic_extension(form, Vector::Unit(nf, b));
    extk.col(b) = kappa_harmonic_extension(form, kappa, Vector::Unit(nf, b));
  }

  PerturbedTraceReport report;
  const double scale =
      std::max({base.S.cwiseAbs().maxCoeff(), pert.S.cwiseAbs().maxCoeff(),
                1e-300});

  // (i) resolvent identity on the interior block, checked columnwise.
  double res = 0.0;
  if (!G.empty()) {
    SymSolver green(submatrix(form.energy_matrix(), G, G));
    Matrix weighted(G.size(), nf);
    for (std::size_t g = 0; g < G.size(); ++g)
      weighted.row(g) = kv[G[g]] * extk.row(G[g]);
    const Matrix healed = green.solve(weighted);
    for (int b = 0; b < nf; ++b)
      for (std::size_t g = 0; g < G.size(); ++g)
        res = std::max(res, std::abs(ext0(G[g], b) - extk(G[g], b) -
                                     healed(g, b)));
    const double ext_scale =
        std::max({ext0.cwiseAbs().maxCoeff(), extk.cwiseAbs().maxCoeff(), 1.0});
    res /= ext_scale;
  }
  report.resolvent_residual = res;

  // (ii) perturbation matrix P_{bc} = sum_i kappa_i (H^k e_b)_i (H e_c)_i;
  // on F the factors collapse to the boundary data, so the full-vertex sum
  // also covers boundary-supported kappa.
  Matrix p = Matrix::Zero(nf, nf);
  for (int b = 0; b < nf; ++b)
    for (int c = 0; c < nf; ++c)
      for (int i = 0; i < n; ++i)
        p(b, c) += kv[i] * extk(i, b) * ext0(i, c);
  report.perturbation_matrix = p;
  report.split_residual =
      (pert.S - base.S - p).cwiseAbs().maxCoeff() / scale;

  // (iii) symmetry of P (the discrete U_lambda(xi,eta) = U_lambda(eta,xi)).
  report.symmetry_residual =
      (p - p.transpose()).cwiseAbs().maxCoeff() / scale;

  // (iv) rearranged jump/killing representation against the base
  // Beurling-Deny data. kcheck0 (base killing) is zero for conservative
  // base forms, where V reduces to the row sums of P alone.
  const Vector v = p.rowwise().sum();
  report.killing_change = v;
  const BeurlingDenyData bd = beurling_deny(base, rtol);
  double worst = 0.0;
  for (int b = 0; b < nf; ++b) {
    const Vector phi = Vector::Unit(nf, b) + 0.5 * Vector::Ones(nf);
    const double lhs = phi.dot(pert.S * phi);
    double rhs = 0.0;
    for (int i = 0; i < nf; ++i)
      for (int j = 0; j < nf; ++j)
        if (i != j)
          rhs += 0.5 * (phi[i] - phi[j]) * (phi[i] - phi[j]) *
                 (bd.jump_kernel(i, j) - p(i, j));
    for (int i = 0; i < nf; ++i)
      rhs += phi[i] * phi[i] * (bd.killing_vector[i] + v[i]);
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  report.rearrangement_residual = worst / scale;

  report.pass = report.resolvent_residual <= rtol &&
                report.split_residual <= rtol &&
                report.symmetry_residual <= 1e-12 &&
                report.rearrangement_residual <= rtol;
  return report;
}

BoundaryRecovery calderon_boundary_recover(const DnOperator& dn_perturbed,
                                           const DnOperator& dn_base,
                                           double rtol) {
  if (dn_perturbed.boundary_ids != dn_base.boundary_ids)
    throw InputError("calderon_boundary_recover: boundary sets differ");
  if ((dn_perturbed.mu - dn_base.mu).cwiseAbs().maxCoeff() >
      1e-12 * dn_base.mu.maxCoeff())
    throw InputError("calderon_boundary_recover: boundary measures differ");

  const Matrix diff = dn_perturbed.S - dn_base.S;
  BoundaryRecovery out;
  double off = 0.0;
  for (int i = 0; i < diff.rows(); ++i)
    for (int j = 0; j < diff.cols(); ++j)
      if (i != j) off = std::max(off, std::abs(diff(i, j)));
  out.offdiagonal_residual = off;
  const double scale = std::max(
      {dn_base.S.cwiseAbs().maxCoeff(), diff.cwiseAbs().maxCoeff(), 1e-300});
  if (off > rtol * scale) {
    std::ostringstream msg;
    msg << "DN difference is not diagonal (off-diagonal residual " << off
        << "); perturbation is not boundary-supported";
    throw NonDiagonalDifference(msg.str());
  }
  out.kappa_on_boundary = diff.diagonal();
  return out;
}

}  // namespace dnlab
