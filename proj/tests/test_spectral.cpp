#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dnlab/linalg.hpp"
#include "dnlab/perturbation.hpp"
#include "dnlab/rng.hpp"
#include "dnlab/spectral.hpp"
#include "dnlab/verify.hpp"
#include "test_fixtures.hpp"

using namespace dnlab;
using dnlab::testing::p3;
using dnlab::testing::s3;

namespace {

DnOperator p3_attractive() {
  Vector minus = Vector::Zero(3);
  minus[1] = 1.0;
  return perturbed_dn(p3(), SignedPotential(Vector::Zero(3), minus));
}

}  // namespace

TEST_CASE("spectrum of the shipped fixtures") {
  SUBCASE("P3: {0, 1}") {
    const SpectralResult spec = spectrum(dn_operator(p3()));
    CHECK(spec.eigenvalues[0] == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(spec.eigenvalues[1] == doctest::Approx(1.0));
    CHECK(spec.simple.value_or(false));
  }
  SUBCASE("P3 with kappa = -1 at b: {-1, 1}, flat ground state") {
    const SpectralResult spec = spectrum(p3_attractive());
    CHECK(spec.eigenvalues[0] == doctest::Approx(-1.0));
    CHECK(spec.eigenvalues[1] == doctest::Approx(1.0));
    CHECK(spec.ground_state[0] == doctest::Approx(1.0 / std::sqrt(2.0)));
    CHECK(spec.ground_state[1] == doctest::Approx(1.0 / std::sqrt(2.0)));
  }
  SUBCASE("S3: {0, 1, 1} with a degenerate upper pair") {
    const SpectralResult spec = spectrum(dn_operator(s3()));
    CHECK(spec.eigenvalues[0] == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(spec.eigenvalues[1] == doctest::Approx(1.0));
    CHECK(spec.eigenvalues[2] == doctest::Approx(1.0));
    CHECK(spec.simple.value_or(false));  // gap at the bottom is clean
  }
  SUBCASE("eigenvectors are mu-orthonormal") {
    const FormSpec form = FormSpec(
        {"a", "b", "c"}, {{"a", "b", 1.0}, {"b", "c", 1.0}}, {},
        {{"a", 1.0}, {"b", 1.0}, {"c", 1.0}}, {"a", "c"},
        {{"a", 2.0}, {"c", 0.5}});
    const DnOperator dn = dn_operator(form);
    const SpectralResult spec = spectrum(dn);
    const Matrix gram = spec.eigenvectors.transpose() *
                        dn.mu.asDiagonal() * spec.eigenvectors;
    CHECK((gram - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() <= 1e-12);
    // Generator identity diag(mu) N v = lambda diag(mu) v.
    for (int k = 0; k < 2; ++k) {
      const Vector lhs = dn.S * spec.eigenvectors.col(k);
      const Vector rhs = spec.eigenvalues[k] *
                         (dn.mu.asDiagonal() * spec.eigenvectors.col(k));
      CHECK((lhs - rhs).cwiseAbs().maxCoeff() <= 1e-12);
    }
  }
}

TEST_CASE("alpha-excessive functions") {
  const DnOperator dn = p3_attractive();
  const SpectralResult spec = spectrum(dn);
  const Vector ground = spec.ground_state;
  const double lambda1 = spec.eigenvalues[0];

  SUBCASE("ground state at alpha = -lambda1 (equality case)") {
    const auto r = is_alpha_excessive(dn, ground, -lambda1);
    CHECK(r.excessive);
    CHECK(r.method == ExcessiveCheck::generator);
  }
  SUBCASE("below -lambda1 the ground state fails") {
    CHECK_FALSE(is_alpha_excessive(dn, ground, -lambda1 - 0.25).excessive);
  }
  SUBCASE("negative phi is never excessive") {
    Vector phi(2);
    phi << 1.0, -0.1;
    CHECK_FALSE(is_alpha_excessive(dn, phi, 10.0).excessive);
  }
  SUBCASE("resolvent images of positive data are excessive") {
    for (int trial = 0; trial < 10; ++trial) {
      CounterRng rng(123, trial);
      const double alpha = -lambda1 + 0.5 + rng.uniform();
      Matrix shifted = dn.S;
      shifted.diagonal() += alpha * dn.mu;
      Vector f(2);
      f << 0.5 + rng.uniform(), 0.5 + rng.uniform();
      const Vector h = SymSolver(shifted).solve(Vector(dn.mu.cwiseProduct(f)));
      REQUIRE(h.minCoeff() > 0.0);
      CHECK(is_alpha_excessive(dn, h, alpha).excessive);
    }
  }
}

TEST_CASE("h-transform conjugation") {
  const DnOperator dn = p3_attractive();
  SUBCASE("identity transform") {
    const HTransform ht = h_transform(dn, Vector::Ones(2), 0.0);
    CHECK((ht.transformed_generator - dn.N).cwiseAbs().maxCoeff() <= 1e-15);
    CHECK((ht.transformed_measure - dn.mu).cwiseAbs().maxCoeff() <= 1e-15);
  }
  SUBCASE("flat h with alpha = 1 zeroes the row sums") {
    const HTransform ht = h_transform(dn, Vector::Ones(2), 1.0);
    Matrix expected(2, 2);
    expected << 1.0, -1.0, -1.0, 1.0;
    CHECK((ht.transformed_generator - expected).cwiseAbs().maxCoeff() <=
          1e-14);
    CHECK((ht.transformed_generator * Vector::Ones(2)).cwiseAbs().maxCoeff() <=
          1e-14);
  }
  SUBCASE("ground state annihilates constants") {
    const SpectralResult spec = spectrum(dn);
    const HTransform ht =
        h_transform(dn, spec.ground_state, -spec.eigenvalues[0]);
    CHECK((ht.transformed_generator * Vector::Ones(2)).cwiseAbs().maxCoeff() <=
          1e-12);
  }
  SUBCASE("nonpositive h is rejected") {
    Vector h(2);
    h << 1.0, 0.0;
    CHECK_THROWS_AS(h_transform(dn, h, 0.0), NonPositiveH);
  }
  SUBCASE("transformed form is symmetric under the transformed measure") {
    CounterRng rng(5, 0);
    Vector h(2);
    h << 0.5 + rng.uniform(), 0.5 + rng.uniform();
    const HTransform ht = h_transform(dn, h, 0.3);
    const Matrix sym =
        ht.transformed_measure.asDiagonal() * ht.transformed_generator;
    CHECK((sym - sym.transpose()).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("semigroup conjugation identity on a t-grid") {
  // e^{-t L^h} phi = e^{-alpha t} e^{-tN}(phi h) / h at t in {0.1, 1, 10}.
  for (int trial = 0; trial < 8; ++trial) {
    CounterRng rng(246, trial);
    const FormSpec form = random_connected_form(rng);
    RandomPotentialOptions opts;
    opts.ensure_interior_positivity = true;
    const SignedPotential kappa = random_signed_potential(rng, form, opts);
    const DnOperator dn = perturbed_dn(form, kappa);
    const int nf = form.n_boundary();

    Vector h(nf), phi(nf);
    for (int i = 0; i < nf; ++i) {
      h[i] = 0.5 + rng.uniform();
      phi[i] = 2.0 * rng.uniform() - 1.0;
    }
    const double alpha = 0.7;
    const HTransform ht = h_transform(dn, h, alpha);
    for (double t : {0.1, 1.0, 10.0}) {
      const Vector lhs = expm(Matrix(-t * ht.transformed_generator)) * phi;
      const Vector rhs = std::exp(-alpha * t) *
                         (trace_semigroup(dn, t) * phi.cwiseProduct(h))
                             .cwiseQuotient(h);
      CHECK((lhs - rhs).cwiseAbs().maxCoeff() <=
            1e-8 * std::max(1.0, rhs.cwiseAbs().maxCoeff()));
    }
  }
}

TEST_CASE("excessive h makes the transformed semigroup sub-Markovian") {
  const DnOperator dn = p3_attractive();
  const SpectralResult spec = spectrum(dn);
  for (double extra : {0.0, 0.5, 2.0}) {
    const double alpha = -spec.eigenvalues[0] + extra;
    const HTransform ht = h_transform(dn, spec.ground_state, alpha);
    CHECK(is_dirichlet_matrix(ht.transformed_generator));
    for (double t : {0.1, 1.0}) {
      const Matrix semi = expm(Matrix(-t * ht.transformed_generator));
      CHECK(semi.minCoeff() >= -1e-12);
      CHECK((semi * Vector::Ones(2)).maxCoeff() <= 1.0 + 1e-12);
    }
  }
}

TEST_CASE("trichotomy at and away from the ground-state pair") {
  const DnOperator dn = p3_attractive();
  const SpectralResult spec = spectrum(dn);
  const double lambda1 = spec.eigenvalues[0];

  SUBCASE("ground state at -lambda1: irreducible, nonnegative, recurrent") {
    const auto t = trichotomy(dn, spec.ground_state, -lambda1);
    CHECK(t.irreducible);
    CHECK(t.nonnegative);
    CHECK(t.recurrent);
    CHECK(t.ground_state_characterization);
    CHECK(t.consistent);
  }
  SUBCASE("shifted alpha keeps nonnegativity but kills recurrence") {
    const auto t = trichotomy(dn, spec.ground_state, -lambda1 + 1.0);
    CHECK(t.irreducible);
    CHECK(t.nonnegative);
    CHECK_FALSE(t.recurrent);
    CHECK(t.consistent);
  }
  SUBCASE("resolvent image at alpha > -lambda1 is transient") {
    const double alpha = -lambda1 + 1.0;
    Matrix shifted = dn.S;
    shifted.diagonal() += alpha * dn.mu;
    Vector f(2);
    f << 1.0, 2.0;
    const Vector h = SymSolver(shifted).solve(Vector(dn.mu.cwiseProduct(f)));
    REQUIRE(h.minCoeff() > 0.0);
    const auto t = trichotomy(dn, h, alpha);
    CHECK_FALSE(t.recurrent);
    CHECK(t.consistent);
  }
  SUBCASE("non-excessive h is refused") {
    CHECK_THROWS_AS(trichotomy(dn, spec.ground_state, -lambda1 - 1.0),
                    NotExcessive);
  }
}

TEST_CASE("Perron behaviour over random positivity-preserving instances") {
  int tested = 0;
  for (int trial = 0; trial < 100; ++trial) {
    CounterRng rng(1717, trial);
    const FormSpec form = random_connected_form(rng);
    RandomPotentialOptions opts;
    opts.ensure_interior_positivity = true;
    const SignedPotential kappa = random_signed_potential(rng, form, opts);
    const DnOperator dn = perturbed_dn(form, kappa);
    REQUIRE(is_markovian(dn.S));
    REQUIRE(offdiagonal_connected(dn.S));
    const SpectralResult spec = spectrum(dn);
    if (!spec.simple.has_value()) continue;  // below the gap threshold
    CHECK(spec.simple.value());
    CHECK(spec.ground_state.minCoeff() > 0.0);
    ++tested;
  }
  CHECK(tested >= 95);
}

TEST_CASE("recurrence happens exactly at the ground-state pair") {
  for (int trial = 0; trial < 60; ++trial) {
    CounterRng rng(2718, trial);
    const FormSpec form = random_connected_form(rng);
    RandomPotentialOptions opts;
    opts.ensure_interior_positivity = true;
    const SignedPotential kappa = random_signed_potential(rng, form, opts);
    const DnOperator dn = perturbed_dn(form, kappa);
    const SpectralResult spec = spectrum(dn);
    if (!spec.simple.value_or(false)) continue;
    const double lambda1 = spec.eigenvalues[0];

    const auto at_pair = trichotomy(dn, spec.ground_state, -lambda1);
    CHECK(at_pair.recurrent);
    CHECK(at_pair.consistent);

    const auto off_pair = trichotomy(dn, spec.ground_state, -lambda1 + 0.4);
    CHECK_FALSE(off_pair.recurrent);
    CHECK(off_pair.consistent);
  }
}

TEST_CASE("h-transform Beurling-Deny identity for bounded data") {
  // E^h_alpha(phi, phi) = 1/2 sum (phi_i - phi_j)^2 h_i h_j (J0 - J_P)_ij
  //                       + sum phi_i^2 k^h_i
  // with k^h_i defined through E_alpha(phi^2 h, h).
  for (int trial = 0; trial < 20; ++trial) {
    CounterRng rng(888, trial);
    const FormSpec form = random_connected_form(rng);
    RandomPotentialOptions opts;
    opts.ensure_interior_positivity = true;
    const SignedPotential kappa = random_signed_potential(rng, form, opts);
    const DnOperator dn = perturbed_dn(form, kappa);
    const int nf = form.n_boundary();

    Vector h(nf), phi(nf);
    for (int i = 0; i < nf; ++i) {
      h[i] = 0.5 + rng.uniform();
      phi[i] = 2.0 * rng.uniform() - 1.0;
    }
    const double alpha = 0.9;

    // Left side through the transformed quadratic form.
    const Matrix s_alpha = [&] {
      Matrix s = dn.S;
      s.diagonal() += alpha * dn.mu;
      return s;
    }();
    const double lhs = (phi.cwiseProduct(h)).dot(s_alpha * phi.cwiseProduct(h));

    // Jump part: off-diagonal of S_alpha gives -(h_i h_j (J0 - J_P))_ij
    // entrywise, independent of how it splits into base and perturbation.
    double jump = 0.0;
    for (int i = 0; i < nf; ++i)
      for (int j = 0; j < nf; ++j)
        if (i != j)
          jump += 0.5 * (phi[i] - phi[j]) * (phi[i] - phi[j]) * h[i] * h[j] *
                  (-s_alpha(i, j));
    // Killing part through the polarization E_alpha(phi^2 h, h).
    const Vector phi2h = phi.array().square().matrix().cwiseProduct(h);
    const double killing = phi2h.dot(s_alpha * h);

    CHECK(lhs == doctest::Approx(jump + killing).epsilon(1e-10));
  }
}
