#include "dnlab/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <thread>

#include "dnlab/bessel.hpp"
#include "dnlab/rng.hpp"

namespace dnlab {

namespace {

constexpr double kPi = std::numbers::pi;

// Jump rates q_ij = w_ij / m_i recovered from the energy matrix
// (off-diagonal entries are -w_ij).
struct ChainRates {
  explicit ChainRates(const FormSpec& form) {
    const int n = form.size();
    const auto& a = form.energy_matrix();
    const auto& m = form.measure();
    total.assign(n, 0.0);
    targets.resize(n);
    cumulative.resize(n);
    for (int i = 0; i < n; ++i) {
      double acc = 0.0;
      for (int j = 0; j < n; ++j) {
        if (j == i || a(i, j) >= 0.0) continue;
        acc += -a(i, j) / m[i];
        targets[i].push_back(j);
        cumulative[i].push_back(acc);
      }
      total[i] = acc;
    }
  }

  int jump_from(int v, double u) const {
    const auto& cum = cumulative[v];
    const double target = u * total[v];
    const auto it = std::upper_bound(cum.begin(), cum.end(), target);
    const std::size_t k =
        std::min<std::size_t>(it - cum.begin(), cum.size() - 1);
    return targets[v][k];
  }

  std::vector<double> total;
  std::vector<std::vector<int>> targets;
  std::vector<std::vector<double>> cumulative;
};

// Fill out[i] = fn(i) for i in [0, n) with the given worker count,
// then reduce in index order; bit-identical for any worker count.
template <typename T, typename Fn>
std::vector<T> parallel_map(long long n, int workers, Fn&& fn) {
  std::vector<T> out(n);
  workers = std::max(1, workers);
  if (workers == 1) {
    for (long long i = 0; i < n; ++i) out[i] = fn(i);
    return out;
  }
  std::vector<std::thread> pool;
  const long long chunk = (n + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    const long long lo = w * chunk;
    const long long hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([&, lo, hi] {
      for (long long i = lo; i < hi; ++i) out[i] = fn(i);
    });
  }
  for (auto& t : pool) t.join();
  return out;
}

}  // namespace

ChainPath simulate_chain(const FormSpec& form, const SignedPotential& kappa,
                         int start, double horizon, std::uint64_t seed,
                         std::uint64_t path_index) {
  if (start < 0 || start >= form.size())
    throw InputError("simulate_chain: start vertex out of range");
  if (!(horizon > 0.0)) throw InputError("simulate_chain: horizon must be > 0");
  const ChainRates rates(form);
  const Vector density =
      kappa.signed_vector().cwiseQuotient(form.measure());

  CounterRng rng(seed, path_index);
  ChainPath path;
  double exponent = 0.0;
  double remaining = horizon;
  int v = start;
  while (true) {
    const double rate = rates.total[v];
    double hold = rate > 0.0 ? rng.exponential(rate) : remaining;
    if (hold >= remaining) hold = remaining;
    path.states.push_back(v);
    path.holding_times.push_back(hold);
    exponent += density[v] * hold;
    remaining -= hold;
    if (remaining <= 0.0) break;
    v = rates.jump_from(v, rng.uniform());
  }
  path.feynman_kac_weight = std::exp(-exponent);
  return path;
}

namespace {

// One boundary excursion: total boundary-clock time held at `start`
// (over all consecutive returns) and the first other boundary vertex hit.
struct Excursion {
  double clock;
  int dest;
};

Excursion run_excursion(const ChainRates& rates, const FormSpec& form,
                        const Vector& clock_rate, int start, CounterRng& rng) {
  double clock = 0.0;
  int v = start;
  while (true) {
    if (rates.total[v] <= 0.0)
      throw NumericError("traced chain: absorbing vertex reached");
    const double hold = rng.exponential(rates.total[v]);
    if (v == start) clock += clock_rate[start] * hold;
    v = rates.jump_from(v, rng.uniform());
    if (form.is_boundary(v) && v != start) return {clock, v};
  }
}

}  // namespace

TracedGeneratorEstimate traced_boundary_generator(const FormSpec& form,
                                                  long long samples,
                                                  std::uint64_t seed,
                                                  int workers) {
  if (samples <= 1) throw InputError("traced_boundary_generator: samples > 1");
  if (!is_irreducible(form))
    throw InputError("traced_boundary_generator: form must be irreducible");
  if (form.kill_weights().cwiseAbs().maxCoeff() > 0.0)
    throw InputError(
        "traced_boundary_generator: killing must vanish (conservative chain)");
  const int nf = form.n_boundary();
  if (nf < 2)
    throw InputError("traced_boundary_generator: need at least 2 boundary vertices");

  const ChainRates rates(form);
  // Boundary clock accrues at rate mu_i/m_i while the chain sits at i in F.
  Vector clock_rate = Vector::Zero(form.size());
  for (int b = 0; b < nf; ++b)
    clock_rate[form.boundary_idx()[b]] =
        form.boundary_measure()[b] / form.measure()[form.boundary_idx()[b]];

  TracedGeneratorEstimate out;
  out.generator = Matrix::Zero(nf, nf);
  out.stderr_ = Matrix::Zero(nf, nf);
  out.samples_per_vertex = samples;
  out.seed = seed;

  for (int b = 0; b < nf; ++b) {
    const int start = form.boundary_idx()[b];
    const auto draws = parallel_map<Excursion>(
        samples, workers, [&, b, start](long long i) {
          // Stream keyed by (vertex, sample) so batching cannot reorder it.
          CounterRng rng(seed, static_cast<std::uint64_t>(b) * 0x100000000ull +
                                   static_cast<std::uint64_t>(i));
          return run_excursion(rates, form, clock_rate, start, rng);
        });

    const double n = static_cast<double>(samples);
    double sum_t = 0.0, sum_tt = 0.0;
    for (const auto& e : draws) {
      sum_t += e.clock;
      sum_tt += e.clock * e.clock;
    }
    const double mean_t = sum_t / n;
    const double var_t =
        std::max(0.0, (sum_tt - n * mean_t * mean_t) / (n - 1.0));

    // Diagonal: hold rate nu = 1/mean, delta-method standard error.
    out.generator(b, b) = -1.0 / mean_t;
    out.stderr_(b, b) = std::sqrt(var_t / n) / (mean_t * mean_t);

    for (int c = 0; c < nf; ++c) {
      if (c == b) continue;
      const int target = form.boundary_idx()[c];
      double sum_y = 0.0, sum_yy = 0.0, sum_yt = 0.0;
      for (const auto& e : draws) {
        const double y = e.dest == target ? 1.0 : 0.0;
        sum_y += y;
        sum_yy += y * y;
        sum_yt += y * e.clock;
      }
      const double mean_y = sum_y / n;
      const double ratio = mean_y / mean_t;  // jump intensity b -> c
      const double var_y =
          std::max(0.0, (sum_yy - n * mean_y * mean_y) / (n - 1.0));
      const double cov_yt = (sum_yt - n * mean_y * mean_t) / (n - 1.0);
      const double var_ratio =
          std::max(0.0, var_y - 2.0 * ratio * cov_yt + ratio * ratio * var_t) /
          (n * mean_t * mean_t);
      out.generator(b, c) = ratio;
      out.stderr_(b, c) = std::sqrt(var_ratio);
    }
  }
  return out;
}

TraceCheckReport verify_trace_generator(const FormSpec& form,
                                        const DnOperator& dn,
                                        long long samples, std::uint64_t seed,
                                        int workers) {
  TraceCheckReport report;
  report.estimate = traced_boundary_generator(form, samples, seed, workers);
  const Matrix target = -dn.N;
  bool pass = true;
  for (int i = 0; i < target.rows(); ++i) {
    for (int j = 0; j < target.cols(); ++j) {
      const double dev =
          std::abs(report.estimate.generator(i, j) - target(i, j));
      const double se = report.estimate.stderr_(i, j);
      report.max_abs_deviation = std::max(report.max_abs_deviation, dev);
      if (se > 0.0)
        report.max_sigma = std::max(report.max_sigma, dev / se);
      else if (dev > 0.0)
        pass = false;
      if (dev > 5.0 * se) pass = false;
    }
  }
  report.pass = pass;
  return report;
}

namespace {

// Inverse CDF of the first exit time of standard 2-d Brownian motion from
// the unit ball, started at the center. The survival series
//   P(tau > t) = sum_k (2 / (j_{0,k} J_1(j_{0,k}))) e^{-j_{0,k}^2 t / 2}
// converges fast for t above the table floor, below which virtually no
// probability mass lives.
class ExitTimeTable {
 public:
  ExitTimeTable() {
    constexpr int kZeros = 64;
    std::vector<double> zeros(kZeros), coeff(kZeros);
    for (int k = 0; k < kZeros; ++k) {
      zeros[k] = bessel_j0_zero(k + 1);
      coeff[k] = 2.0 / (zeros[k] * bessel_j(1, zeros[k]));
    }
    log_t_.resize(kNodes);
    cdf_.resize(kNodes);
    const double lo = std::log(5e-3), hi = std::log(30.0);
    for (int i = 0; i < kNodes; ++i) {
      log_t_[i] = lo + (hi - lo) * i / (kNodes - 1);
      const double t = std::exp(log_t_[i]);
      double survival = 0.0;
      // coeff[k] alternates sign through J_1(j_{0,k}); sum smallest first.
      for (int k = kZeros - 1; k >= 0; --k)
        survival += coeff[k] * std::exp(-0.5 * zeros[k] * zeros[k] * t);
      cdf_[i] = std::clamp(1.0 - survival, 0.0, 1.0);
    }
    // The alternating series dips below machine-zero mass at the floor;
    // enforce monotonicity for the binary search.
    for (int i = 1; i < kNodes; ++i) cdf_[i] = std::max(cdf_[i], cdf_[i - 1]);
  }

  double sample(double u) const {
    if (u <= cdf_.front()) return std::exp(log_t_.front());
    if (u >= cdf_.back()) return std::exp(log_t_.back());
    const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    const std::size_t hi = it - cdf_.begin();
    const std::size_t lo = hi - 1;
    const double span = cdf_[hi] - cdf_[lo];
    const double frac = span > 0.0 ? (u - cdf_[lo]) / span : 0.5;
    return std::exp(log_t_[lo] + frac * (log_t_[hi] - log_t_[lo]));
  }

 private:
  static constexpr int kNodes = 16384;
  std::vector<double> log_t_;
  std::vector<double> cdf_;
};

const ExitTimeTable& exit_time_table() {
  static const ExitTimeTable table;
  return table;
}

constexpr double kWosShell = 1e-4;
constexpr int kWosStepCap = 10000;

struct WosSample {
  double value = 0.0;
  bool discarded = false;
};

WosSample wos_sample(const DiskModel& model,
                     const std::function<double(double)>& phi, double x0,
                     double y0, std::uint64_t seed, std::uint64_t index) {
  CounterRng rng(seed, index);
  const ExitTimeTable& table = exit_time_table();
  double x = x0, y = y0;
  double tau = 0.0;
  for (int step = 0; step < kWosStepCap; ++step) {
    const double r = std::hypot(x, y);
    const double ball = 1.0 - r;
    if (ball < kWosShell) {
      const double angle = std::atan2(y, x);
      const double weight =
          model.lambda == 0.0 ? 1.0 : std::exp(-model.lambda * tau);
      return {weight * phi(angle), false};
    }
    // Exit time scales diffusively with the ball radius; the exit point is
    // uniform on the sphere and independent of the time by symmetry.
    tau += ball * ball * table.sample(rng.uniform());
    const double theta = 2.0 * kPi * rng.uniform();
    x += ball * std::cos(theta);
    y += ball * std::sin(theta);
  }
  return {0.0, true};
}

}  // namespace

WosEstimate wos_harmonic_extension(const DiskModel& model,
                                   const std::function<double(double)>& phi,
                                   const std::array<double, 2>& x,
                                   long long samples, std::uint64_t seed,
                                   int workers) {
  if (model.lambda < 0.0)
    throw InputError(
        "wos_harmonic_extension: lambda must be >= 0 (bounded weight)");
  if (std::hypot(x[0], x[1]) >= 1.0)
    throw InputError("wos_harmonic_extension: start point must be interior");
  if (samples <= 1) throw InputError("wos_harmonic_extension: samples > 1");

  const auto draws = parallel_map<WosSample>(
      samples, workers, [&](long long i) {
        return wos_sample(model, phi, x[0], x[1], seed,
                          static_cast<std::uint64_t>(i));
      });

  WosEstimate out;
  double sum = 0.0, sumsq = 0.0;
  long long kept = 0;
  for (const auto& d : draws) {
    if (d.discarded) {
      ++out.discarded;
      continue;
    }
    sum += d.value;
    sumsq += d.value * d.value;
    ++kept;
  }
  out.discarded_fraction =
      static_cast<double>(out.discarded) / static_cast<double>(samples);
  if (kept < 2)
    throw NumericError("wos_harmonic_extension: all samples discarded");
  const double n = static_cast<double>(kept);
  const double mean = sum / n;
  const double var = std::max(0.0, (sumsq - n * mean * mean) / (n - 1.0));
  out.estimate.value = mean;
  out.estimate.stderr_ = std::sqrt(var / n);
  out.estimate.samples = kept;
  out.estimate.seed = seed;
  return out;
}

FkMatrixEstimate fk_transition_estimate(const FormSpec& form,
                                        const SignedPotential& kappa, double t,
                                        long long samples, std::uint64_t seed,
                                        int workers) {
  if (samples <= 1) throw InputError("fk_transition_estimate: samples > 1");
  const int n = form.size();
  FkMatrixEstimate out;
  out.transition = Matrix::Zero(n, n);
  out.stderr_ = Matrix::Zero(n, n);

  for (int start = 0; start < n; ++start) {
    const auto draws = parallel_map<std::pair<double, int>>(
        samples, workers, [&, start](long long i) {
          const ChainPath path = simulate_chain(
              form, kappa, start, t, seed,
              static_cast<std::uint64_t>(start) * 0x100000000ull +
                  static_cast<std::uint64_t>(i));
          return std::make_pair(path.feynman_kac_weight, path.states.back());
        });
    const double ns = static_cast<double>(samples);
    for (int j = 0; j < n; ++j) {
      double sum = 0.0, sumsq = 0.0;
      for (const auto& [w, dest] : draws) {
        const double v = dest == j ? w : 0.0;
        sum += v;
        sumsq += v * v;
      }
      const double mean = sum / ns;
      const double var =
          std::max(0.0, (sumsq - ns * mean * mean) / (ns - 1.0));
      out.transition(start, j) = mean;
      out.stderr_(start, j) = std::sqrt(var / ns);
    }
  }
  return out;
}

}  // namespace dnlab
