#include "dnlab/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "dnlab/bessel.hpp"
#include "dnlab/calderon.hpp"
#include "dnlab/disk.hpp"
#include "dnlab/dn.hpp"
#include "dnlab/linalg.hpp"
#include "dnlab/spectral.hpp"

namespace dnlab {

namespace {

constexpr double kPi = std::numbers::pi;

std::string fmt(double x) {
  std::ostringstream out;
  out.precision(6);
  out << x;
  return out.str();
}

CheckResult residual_check(const std::string& name, double residual,
                           double tol) {
  return {name, residual <= tol, "residual " + fmt(residual) + " (tol " +
                                     fmt(tol) + ")"};
}

Vector random_vector(CounterRng& rng, int n, double lo, double hi) {
  Vector v(n);
  for (int i = 0; i < n; ++i) v[i] = lo + (hi - lo) * rng.uniform();
  return v;
}

}  // namespace

FormSpec random_connected_form(CounterRng& rng, const RandomFormOptions& opts) {
  const int span = opts.max_vertices - opts.min_vertices + 1;
  const int n = opts.min_vertices +
                static_cast<int>(rng.uniform() * span) % span;
  std::vector<std::string> ids;
  for (int v = 0; v < n; ++v) ids.push_back("v" + std::to_string(v));

  EdgeList edges;
  for (int v = 1; v < n; ++v) {
    const int parent = static_cast<int>(rng.uniform() * v) % v;
    edges.emplace_back(ids[v], ids[parent], 0.5 + 1.5 * rng.uniform());
  }
  for (int i = 0; i < n; ++i)
    for (int j = i + 2; j < n; ++j)
      if (rng.uniform() < opts.extra_edge_prob)
        edges.emplace_back(ids[i], ids[j], 0.2 + 1.3 * rng.uniform());

  ScalarMap kill, m, mu;
  for (int v = 0; v < n; ++v) {
    m[ids[v]] = 0.5 + 1.5 * rng.uniform();
    if (opts.with_kill && rng.uniform() < 0.3) kill[ids[v]] = rng.uniform();
  }

  // Boundary: random subset of size 2..n-1, leaving interior nonempty.
  const int nf = 2 + static_cast<int>(rng.uniform() * (n - 2)) % (n - 2);
  std::vector<int> order(n);
  for (int v = 0; v < n; ++v) order[v] = v;
  for (int v = n - 1; v > 0; --v)
    std::swap(order[v], order[static_cast<int>(rng.uniform() * (v + 1)) % (v + 1)]);
  std::vector<std::string> boundary;
  for (int b = 0; b < nf; ++b) {
    boundary.push_back(ids[order[b]]);
    mu[ids[order[b]]] = 0.5 + 1.5 * rng.uniform();
  }
  return FormSpec(ids, edges, kill, m, boundary, mu);
}

SignedPotential random_signed_potential(CounterRng& rng, const FormSpec& form,
                                        const RandomPotentialOptions& opts) {
  const int n = form.size();
  Vector plus = Vector::Zero(n);
  Vector minus = Vector::Zero(n);
  for (int v = 0; v < n; ++v) {
    const bool allowed = opts.boundary_only
                             ? form.is_boundary(v)
                             : (opts.interior_only ? !form.is_boundary(v)
                                                   : true);
    if (!allowed || rng.uniform() >= 0.5) continue;
    const double mag = 1.5 * rng.uniform();
    if (rng.uniform() < 0.5)
      plus[v] = mag;
    else
      minus[v] = mag;
  }

  for (int shrink = 0; shrink < 60; ++shrink) {
    SignedPotential kappa(plus, minus);
    const bool threshold_ok = !opts.ensure_threshold ||
                              decomposition_threshold(form, kappa).passes;
    const bool positivity_ok = !opts.ensure_interior_positivity ||
                               interior_positivity(form, kappa);
    if (threshold_ok && positivity_ok) return kappa;
    minus *= 0.5;
  }
  return SignedPotential(plus, Vector::Zero(n));
}

std::vector<CheckResult> fixture_checks(const FormSpec& form,
                                        const SignedPotential* kappa,
                                        const Matrix* expected_S,
                                        std::uint64_t seed) {
  std::vector<CheckResult> out;
  CounterRng rng(seed, 0x5eedf157u);
  const int n = form.size();
  const int nf = form.n_boundary();

  // Constants: E(1,1) equals the total killing mass.
  {
    const Vector ones = Vector::Ones(n);
    const double diff =
        std::abs(energy(form, ones, ones) - form.kill_weights().sum());
    const double scale = std::max(1.0, form.kill_weights().sum());
    out.push_back(residual_check("energy-of-constants", diff / scale, 1e-12));
  }

  // Lemma-style unique splitting and energy orthogonality.
  {
    double worst_split = 0.0, worst_orth = 0.0;
    for (int trial = 0; trial < 3; ++trial) {
      const Vector u = random_vector(rng, n, -1.0, 1.0);
      const Decomposition d = decompose(form, u);
      worst_split = std::max(
          worst_split,
          (u - d.harmonic_part - d.interior_part).cwiseAbs().maxCoeff() /
              std::max(u.cwiseAbs().maxCoeff(), 1e-300));
      for (int b : form.boundary_idx())
        worst_split = std::max(worst_split, std::abs(d.interior_part[b]));
      const double unit = std::max(energy(form, u, u), 1.0);
      worst_orth = std::max(
          worst_orth,
          std::abs(energy(form, d.harmonic_part, d.interior_part)) / unit);
    }
    out.push_back(residual_check("decomposition-identity", worst_split, 1e-12));
    out.push_back(residual_check("decomposition-orthogonality", worst_orth,
                                 1e-10));
  }

  out.push_back({"energy-markovian", is_markovian(form.energy_matrix()),
                 "off-diagonal sign pattern of A"});

  const DnOperator dn = dn_operator(form);
  const double s_scale = std::max(dn.S.cwiseAbs().maxCoeff(), 1e-300);

  // Trace form equals the energy of the harmonic extension.
  {
    double worst = 0.0;
    for (int trial = 0; trial < nf + 2; ++trial) {
      const Vector phi = trial < nf ? Vector(Vector::Unit(nf, trial))
                                    : random_vector(rng, nf, -1.0, 1.0);
      const Vector u = harmonic_extension(form, phi);
      worst = std::max(worst, std::abs(phi.dot(dn.S * phi) -
                                       energy(form, u, u)));
    }
    out.push_back(
        residual_check("schur-energy-consistency", worst / s_scale, 1e-10));
  }

  out.push_back({"trace-markovian", is_markovian(dn.S),
                 "off-diagonal sign pattern of S"});

  // Beurling-Deny reconstruction from jump kernel and killing.
  {
    const BeurlingDenyData bd = beurling_deny(dn);
    double worst = 0.0;
    for (int trial = 0; trial < 3; ++trial) {
      const Vector phi = random_vector(rng, nf, -1.0, 1.0);
      double rebuilt = 0.0;
      for (int i = 0; i < nf; ++i) {
        rebuilt += phi[i] * phi[i] * bd.killing_vector[i];
        for (int j = 0; j < nf; ++j)
          if (i != j)
            rebuilt += 0.5 * (phi[i] - phi[j]) * (phi[i] - phi[j]) *
                       bd.jump_kernel(i, j);
      }
      worst = std::max(worst, std::abs(phi.dot(dn.S * phi) - rebuilt));
    }
    out.push_back(
        residual_check("beurling-deny-reconstruction", worst / s_scale, 1e-10));
  }

  // Two-stage elimination agrees with one-stage elimination.
  if (form.n_interior() >= 2) {
    const auto& G = form.interior_idx();
    std::vector<int> first(G.begin(), G.begin() + G.size() / 2);
    std::vector<int> second(G.begin() + G.size() / 2, G.end());
    std::vector<int> keep_stage1 = form.boundary_idx();
    keep_stage1.insert(keep_stage1.end(), second.begin(), second.end());
    std::sort(keep_stage1.begin(), keep_stage1.end());
    const Matrix stage1 =
        schur_complement(form.energy_matrix(), keep_stage1, first);
    std::vector<int> keep2, drop2;
    for (std::size_t p = 0; p < keep_stage1.size(); ++p) {
      if (form.is_boundary(keep_stage1[p]))
        keep2.push_back(static_cast<int>(p));
      else
        drop2.push_back(static_cast<int>(p));
    }
    const Matrix two_stage = schur_complement(stage1, keep2, drop2);
    out.push_back(residual_check(
        "tower-property", (two_stage - dn.S).cwiseAbs().maxCoeff() / s_scale,
        1e-10));
  }

  if (expected_S != nullptr) {
    if (expected_S->rows() != nf || expected_S->cols() != nf) {
      out.push_back({"expected-dn-matrix", false, "dimension mismatch"});
    } else {
      out.push_back(residual_check(
          "expected-dn-matrix",
          (dn.S - *expected_S).cwiseAbs().maxCoeff() / s_scale, 1e-12));
    }
  }

  if (kappa == nullptr) return out;

  const auto threshold = decomposition_threshold(form, *kappa);
  out.push_back({"kappa-decomposition-threshold", threshold.passes,
                 "margin " + fmt(threshold.margin)});
  if (!threshold.passes) return out;

  const auto identity = verify_perturbed_trace_identity(form, *kappa);
  out.push_back({"perturbed-trace-identities", identity.pass,
                 "resolvent " + fmt(identity.resolvent_residual) + ", split " +
                     fmt(identity.split_residual) + ", symmetry " +
                     fmt(identity.symmetry_residual) + ", rearrangement " +
                     fmt(identity.rearrangement_residual)});

  if (interior_positivity(form, *kappa)) {
    out.push_back({"positivity-preservation",
                   trace_positivity_preserving(form, *kappa),
                   "interior block PSD, trace sign pattern"});
  }

  const DnOperator pert = perturbed_dn(form, *kappa);
  if (kappa->boundary_supported(form)) {
    Matrix shifted = dn.S;
    Vector kf(nf);
    for (int b = 0; b < nf; ++b)
      kf[b] = kappa->signed_vector()[form.boundary_idx()[b]];
    shifted.diagonal() += kf;
    out.push_back(residual_check(
        "boundary-perturbation-identity",
        (pert.S - shifted).cwiseAbs().maxCoeff() /
            std::max(pert.S.cwiseAbs().maxCoeff(), 1e-300),
        1e-14));
    const auto recovery = calderon_boundary_recover(pert, dn);
    out.push_back(residual_check(
        "boundary-recovery",
        (recovery.kappa_on_boundary - kf).cwiseAbs().maxCoeff() /
            std::max(kf.cwiseAbs().maxCoeff(), 1.0),
        1e-12));
  }

  if (is_markovian(pert.S) && offdiagonal_connected(pert.S)) {
    const SpectralResult spec = spectrum(pert);
    const bool simple = spec.simple.value_or(false);
    const bool positive = spec.ground_state.minCoeff() > 0.0;
    out.push_back({"perron-ground-state", simple && positive,
                   "lambda1 " + fmt(spec.eigenvalues[0])});
    const auto tri = trichotomy(pert, spec.ground_state, -spec.eigenvalues[0]);
    out.push_back({"ground-state-recurrence",
                   tri.recurrent && tri.consistent,
                   "row-sum recurrence against the spectral characterization"});
  }

  return out;
}

std::vector<CheckResult> random_theorem_battery(std::uint64_t seed,
                                                int instances) {
  int positivity_fail = 0, representation_fail = 0, perron_fail = 0;
  int trichotomy_fail = 0, connectivity_fail = 0, excessive_fail = 0;

  for (int i = 0; i < instances; ++i) {
    CounterRng rng(seed, 0xba77e6u + i);
    const FormSpec form = random_connected_form(rng);

    // Positivity preservation under a PSD perturbed interior block.
    {
      RandomPotentialOptions opts;
      opts.ensure_interior_positivity = true;
      const SignedPotential kappa = random_signed_potential(rng, form, opts);
      if (!trace_positivity_preserving(form, kappa)) ++positivity_fail;
    }

    // Form representation identities for a generic admissible kappa.
    {
      const SignedPotential kappa = random_signed_potential(rng, form, {});
      if (!verify_perturbed_trace_identity(form, kappa).pass)
        ++representation_fail;
    }

    // Ground state and trichotomy on a positivity-preserving instance.
    {
      RandomPotentialOptions opts;
      opts.ensure_interior_positivity = true;
      const SignedPotential kappa = random_signed_potential(rng, form, opts);
      const DnOperator dn = perturbed_dn(form, kappa);
      if (!is_markovian(dn.S)) {
        ++positivity_fail;
        continue;
      }
      if (!offdiagonal_connected(dn.S)) {
        ++connectivity_fail;
        continue;
      }
      const SpectralResult spec = spectrum(dn);
      const double lambda1 = spec.eigenvalues[0];
      if (!spec.simple.has_value()) continue;  // degenerate gap: skipped
      if (!(spec.simple.value() && spec.ground_state.minCoeff() > 0.0)) {
        ++perron_fail;
        continue;
      }

      const auto at_ground = trichotomy(dn, spec.ground_state, -lambda1);
      if (!(at_ground.recurrent && at_ground.nonnegative &&
            at_ground.irreducible && at_ground.consistent))
        ++trichotomy_fail;

      const auto shifted = trichotomy(dn, spec.ground_state, -lambda1 + 0.7);
      if (shifted.recurrent || !shifted.nonnegative || !shifted.consistent)
        ++trichotomy_fail;

      // Below -lambda1 no strictly positive excessive function exists.
      if (is_alpha_excessive(dn, spec.ground_state, -lambda1 - 0.5).excessive)
        ++excessive_fail;

      // Resolvent images are excessive and generically transient:
      // h = (N + alpha)^{-1} f solves (S + alpha diag(mu)) h = diag(mu) f.
      const double alpha = -lambda1 + 1.0;
      Matrix shifted_s = dn.S;
      shifted_s.diagonal() += alpha * dn.mu;
      const Vector f = Vector::Ones(dn.S.rows()) +
                       random_vector(rng, static_cast<int>(dn.S.rows()), 0.0, 1.0);
      const Vector h = SymSolver(shifted_s).solve(Vector(dn.mu.cwiseProduct(f)));
      if (h.minCoeff() > 0.0) {
        if (!is_alpha_excessive(dn, h, alpha).excessive)
          ++excessive_fail;
        else if (!trichotomy(dn, h, alpha).consistent)
          ++trichotomy_fail;
      }
    }
  }

  const auto count_check = [&](const std::string& name, int failures) {
    return CheckResult{name, failures == 0,
                       std::to_string(failures) + " failures over " +
                           std::to_string(instances) + " instances"};
  };
  return {
      count_check("thm-positivity-preservation", positivity_fail),
      count_check("thm-form-representation", representation_fail),
      count_check("thm-perron-ground-state", perron_fail),
      count_check("thm-trace-irreducibility", connectivity_fail),
      count_check("thm-recurrence-trichotomy", trichotomy_fail),
      count_check("thm-excessive-functions", excessive_fail),
  };
}

namespace {

// Series oracle for the battery's Bessel cross-checks, independent of the
// evaluator's recurrence/normalization path.
double series_i(int n, double x) {
  double term = 1.0;
  for (int m = 1; m <= n; ++m) term *= (x / 2.0) / m;
  double sum = term;
  for (int k = 1; k < 200; ++k) {
    term *= (x * x / 4.0) / (k * (n + k));
    sum += term;
    if (term < 1e-18 * sum) break;
  }
  return sum;
}

double bisect_j0(double lo, double hi) {
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (bessel_j(0, lo) * bessel_j(0, mid) <= 0.0)
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

std::vector<CheckResult> disk_identity_checks() {
  std::vector<CheckResult> out;

  {
    DiskModel flat{0.0};
    double worst = 0.0;
    for (int n = 0; n <= 8; ++n)
      worst = std::max(worst, std::abs(dn_eigenvalue(flat, n) - 0.5 * n));
    out.push_back(residual_check("cauchy-symbol", worst, 0.0));
  }

  {
    DiskModel model{0.5};
    const double expected = 0.5 * series_i(1, 1.0) / series_i(0, 1.0);
    out.push_back(residual_check(
        "mode0-bessel-quotient",
        std::abs(dn_eigenvalue(model, 0) - expected), 1e-10));
  }

  {
    bool monotone = true;
    const double grid[] = {0.0, 0.5, 1.0, 2.0, 4.0};
    for (int n = 0; n <= 8 && monotone; ++n) {
      double prev = -1e300;
      for (double lambda : grid) {
        const double mu = dn_eigenvalue(DiskModel{lambda}, n);
        if (mu <= prev) monotone = false;
        prev = mu;
      }
    }
    for (double lambda : grid) {
      double prev = -1e300;
      for (int n = 0; n <= 8; ++n) {
        const double mu = dn_eigenvalue(DiskModel{lambda}, n);
        if (n > 0 && mu <= prev) monotone = false;
        prev = mu;
      }
    }
    out.push_back({"eigenvalue-monotonicity", monotone,
                   "increasing in lambda and in |n|"});
  }

  {
    const int nodes = 512;
    std::vector<double> cos1(nodes), flat(nodes, 1.0);
    for (int k = 0; k < nodes; ++k) cos1[k] = std::cos(2.0 * kPi * k / nodes);
    out.push_back(residual_check(
        "douglas-cosine", std::abs(douglas_energy(cos1) - 0.5 * kPi), 1e-6));
    out.push_back(residual_check("douglas-constant",
                                 std::abs(douglas_energy(flat)), 1e-12));
  }

  {
    const std::array<double, 2> x{0.3, 0.2};
    const int nodes = 512;
    double mass = 0.0;
    for (int k = 0; k < nodes; ++k)
      mass += poisson_kernel(x, 2.0 * kPi * k / nodes) * (2.0 * kPi / nodes);
    out.push_back(
        residual_check("poisson-normalization", std::abs(mass - 1.0), 1e-10));
  }

  {
    DiskModel model{0.5};
    const double expected = 1.0 / series_i(0, 1.0);
    out.push_back(residual_check(
        "gauge-center", std::abs(gauge_radial(model, 0.0) - expected), 1e-10));
    DiskModel near{gauge_threshold() + 1e-4};
    out.push_back({"gauge-divergence", gauge_radial(near, 0.0) > 1e3,
                   "value " + fmt(gauge_radial(near, 0.0))});
  }

  {
    DiskModel model{0.5, 16, 256, 256};
    out.push_back(residual_check(
        "v-lambda-cross-identity",
        std::abs(v_lambda(model) - dn_eigenvalue(model, 0)), 1e-6));
    DiskModel negative{-1.0, 16, 256, 256};
    out.push_back({"v-lambda-negative-sign", v_lambda(negative) < 0.0,
                   "value " + fmt(v_lambda(negative))});
  }

  {
    const double j01 = bessel_j0_zero(1);
    const double oracle = bisect_j0(2.0, 3.0);
    out.push_back(
        residual_check("j01-root", std::abs(j01 - oracle), 1e-12));
    out.push_back(residual_check(
        "first-dirichlet-eigenvalue",
        std::abs(first_dirichlet_eigenvalue() + j01 * j01), 1e-12));
  }

  return out;
}

}  // namespace dnlab
