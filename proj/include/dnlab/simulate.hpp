#pragma once

#include <array>
#include <cstdint>
#include <functional>

#include "dnlab/disk.hpp"
#include "dnlab/dn.hpp"
#include "dnlab/forms.hpp"
#include "dnlab/perturbation.hpp"

namespace dnlab {

/// One continuous-time chain trajectory with its Feynman-Kac weight
/// e^{-integral (kappa/m)(X_s) ds}; the exponent takes kappa as a measure,
/// so its density against m enters the clock (kappa = c.m therefore gives
/// the plain e^{-ct} subprocess weight).
struct ChainPath {
  std::vector<int> states;
  std::vector<double> holding_times;
  double feynman_kac_weight = 1.0;
};

/// Exact chain sampling: exponential holds at rate sum_j w_ij / m_i, jumps
/// proportional to w_ij. A vertex with no edges absorbs until the horizon.
/// path_index selects the per-sample random stream.
ChainPath simulate_chain(const FormSpec& form, const SignedPotential& kappa,
                         int start, double horizon, std::uint64_t seed,
                         std::uint64_t path_index = 0);

struct McEstimate {
  double value = 0.0;
  double stderr_ = 0.0;
  long long samples = 0;
  std::uint64_t seed = 0;
};

/// Empirical generator of the chain observed on the boundary only, with
/// holding measured by the boundary clock (rate mu_i/m_i while at i in F,
/// zero inside). Converges to -N. Entries and their standard errors come
/// from holding-time/jump-count statistics per starting vertex.
struct TracedGeneratorEstimate {
  Matrix generator;
  Matrix stderr_;
  long long samples_per_vertex = 0;
  std::uint64_t seed = 0;
};

/// Requires an irreducible form with zero killing (conservative chain).
TracedGeneratorEstimate traced_boundary_generator(const FormSpec& form,
                                                  long long samples,
                                                  std::uint64_t seed,
                                                  int workers = 1);

/// Comparison of the traced-chain estimate against -N.
struct TraceCheckReport {
  TracedGeneratorEstimate estimate;
  double max_abs_deviation = 0.0;
  /// Largest |deviation| / stderr over entries.
  double max_sigma = 0.0;
  /// True when every entry deviates by less than 5 standard errors.
  bool pass = false;
};
TraceCheckReport verify_trace_generator(const FormSpec& form,
                                        const DnOperator& dn,
                                        long long samples, std::uint64_t seed,
                                        int workers = 1);

/// Walk-on-spheres estimate of E_x[e^{-lambda tau} phi(X_tau)] for the
/// unit disk, lambda >= 0. Exit times of each sphere are drawn exactly
/// from the tabulated inverse CDF of the ball exit time, so the e^{-lambda
/// tau} weight carries no path-discretization bias. Walks that fail to
/// reach the 1e-4 boundary shell within 10^4 steps are discarded and
/// counted.
struct WosEstimate {
  McEstimate estimate;
  long long discarded = 0;
  double discarded_fraction = 0.0;
};
WosEstimate wos_harmonic_extension(const DiskModel& model,
                                   const std::function<double(double)>& phi,
                                   const std::array<double, 2>& x,
                                   long long samples, std::uint64_t seed,
                                   int workers = 1);

/// Monte Carlo Feynman-Kac transition matrix estimate
/// (P_t f)(i) ~ mean of e^{-A_t} 1{X_t = j}; row i holds the estimates for
/// all target states j, with matching standard errors.
struct FkMatrixEstimate {
  Matrix transition;
  Matrix stderr_;
};
FkMatrixEstimate fk_transition_estimate(const FormSpec& form,
                                        const SignedPotential& kappa, double t,
                                        long long samples, std::uint64_t seed,
                                        int workers = 1);

}  // namespace dnlab
