#include "qmet/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <thread>
#include <vector>

namespace qmet {

namespace rng {

namespace {

std::uint64_t splitmix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t mix(std::uint64_t seed, std::uint64_t stream,
                  std::uint64_t index) {
  std::uint64_t h = splitmix(seed);
  h = splitmix(h ^ stream);
  h = splitmix(h ^ index);
  return h;
}

double uniform(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  return static_cast<double>(mix(seed, stream, index) >> 11) * 0x1.0p-53;
}

}  // namespace rng

namespace {

/// Measurement geometry shared by both protocols: the outcome mean is
/// e^{-scale_gamma} cos(g * scale) with scale = T (product, per qubit) or
/// nT (cat parity).
struct Protocol {
  double scale = 1;       // radians of fringe phase per unit g
  double decay_inv = 1;   // e^{-n gamma2 T}
  double decay = 1;       // e^{+n gamma2 T}
  long long draws = 0;    // outcomes pooled into one estimate

  double prob_plus(double g) const {
    return 0.5 * (1.0 + decay_inv * std::cos(g * scale));
  }
};

Protocol make_protocol(const ProbeSpec& spec, const ChannelParams& params,
                       long long trials) {
  Protocol p;
  const double reps_of_T = spec.family == ProbeFamily::cat
                               ? static_cast<double>(spec.n)
                               : 1.0;
  p.scale = reps_of_T * spec.T;
  p.decay_inv = std::exp(-reps_of_T * params.gamma2() * spec.T);
  p.decay = 1.0 / p.decay_inv;
  // Product probes are measured qubit by qubit, so n qubits per probe pool
  // n independent sigma_x outcomes into the average.
  p.draws = spec.family == ProbeFamily::cat
                ? trials
                : trials * static_cast<long long>(spec.n);
  return p;
}

int thread_count() {
  if (const char* env = std::getenv("QMET_THREADS")) {
    const int v = std::atoi(env);
    if (v >= 1) return v;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(std::min(hw, 8u));
}

struct RepStats {
  double g_est_mid = 0;
  double g_est_lo = 0;
  double g_est_hi = 0;
  long long plus_mid = 0;
  bool clipped = false;
  bool degenerate = false;
};

}  // namespace

double prob_plus_sigma_x(const ProbeSpec& spec, const ChannelParams& params) {
  return 0.5 * (1.0 + std::exp(-params.gamma2() * spec.T) *
                          std::cos(spec.g * spec.T));
}

double prob_plus_parity(const ProbeSpec& spec, const ChannelParams& params) {
  const double n = static_cast<double>(spec.n);
  return 0.5 * (1.0 + std::exp(-n * params.gamma2() * spec.T) *
                          std::cos(n * spec.g * spec.T));
}

int sample_sigma_x(const ProbeSpec& spec, const ChannelParams& params,
                   std::uint64_t seed) {
  return rng::uniform(seed, 0, 0) < prob_plus_sigma_x(spec, params) ? 1 : -1;
}

int sample_parity(const ProbeSpec& spec, const ChannelParams& params,
                  std::uint64_t seed) {
  return rng::uniform(seed, 0, 0) < prob_plus_parity(spec, params) ? 1 : -1;
}

double sweet_spot_offset(const ProbeSpec& spec) {
  if (!(spec.T > 0.0)) {
    throw ValidationError("sweet_spot_offset: T must be positive");
  }
  const double scale = static_cast<double>(spec.n) * spec.T;
  // Nearest g' with g' scale = pi/2 mod pi; ties resolve to the larger g'.
  const double k_float = spec.g * scale / std::numbers::pi - 0.5;
  const double k_lo = std::floor(k_float);
  const double cand_lo = (k_lo + 0.5) * std::numbers::pi / scale;
  const double cand_hi = (k_lo + 1.5) * std::numbers::pi / scale;
  return (spec.g - cand_lo) < (cand_hi - spec.g) ? cand_lo : cand_hi;
}

double predicted_delta_g(const ProbeSpec& spec, const ChannelParams& params,
                         long long trials) {
  const Protocol p = make_protocol(spec, params, trials);
  const double phase = spec.g * p.scale;
  const double s = std::abs(std::sin(phase));
  if (s < 1e-300) return std::numeric_limits<double>::infinity();
  const double c = std::cos(phase);
  return p.decay * std::sqrt(1.0 - p.decay_inv * p.decay_inv * c * c) /
         (p.scale * std::sqrt(static_cast<double>(p.draws)) * s);
}

EstimateReport run_trials(const TrialConfig& cfg) {
  if (cfg.trials < 2) throw ValidationError("run_trials: trials must be >= 2");
  if (cfg.repetitions < 2) {
    throw ValidationError("run_trials: repetitions must be >= 2");
  }
  if (!(cfg.spec.T > 0.0)) {
    throw ValidationError("run_trials: T must be positive");
  }
  const Protocol proto = make_protocol(cfg.spec, cfg.params, cfg.trials);
  const double delta =
      cfg.fringe_fraction * 2.0 * std::numbers::pi / proto.scale;
  const double p_mid = proto.prob_plus(cfg.g_true);
  const double p_lo = proto.prob_plus(cfg.g_true - delta);
  const double p_hi = proto.prob_plus(cfg.g_true + delta);

  // Fringe branch of the operating point; the estimator inverts arccos onto
  // this branch (the feedback loop's job, done exactly here).
  const double theta_true = cfg.g_true * proto.scale;
  const long long branch = static_cast<long long>(std::floor(
      theta_true / std::numbers::pi));
  const auto estimate = [&](double mean_outcome, bool* clipped) {
    double arg = proto.decay * mean_outcome;
    if (arg > 1.0 || arg < -1.0) {
      if (clipped != nullptr) *clipped = true;
      arg = std::clamp(arg, -1.0, 1.0);
    }
    const double principal = std::acos(arg);
    const double theta = (branch % 2 == 0)
                             ? static_cast<double>(branch) * std::numbers::pi + principal
                             : static_cast<double>(branch + 1) * std::numbers::pi - principal;
    return theta / proto.scale;
  };

  const int reps = cfg.repetitions;
  std::vector<RepStats> stats(static_cast<std::size_t>(reps));
  const auto run_rep = [&](int r) {
    long long plus_mid = 0, plus_lo = 0, plus_hi = 0;
    for (long long t = 0; t < proto.draws; ++t) {
      const double u = rng::uniform(cfg.seed, static_cast<std::uint64_t>(r),
                                    static_cast<std::uint64_t>(t));
      plus_mid += u < p_mid;
      plus_lo += u < p_lo;
      plus_hi += u < p_hi;
    }
    const double inv = 1.0 / static_cast<double>(proto.draws);
    RepStats s;
    s.plus_mid = plus_mid;
    s.degenerate = plus_mid == 0 || plus_mid == proto.draws;
    s.g_est_mid = estimate(2.0 * plus_mid * inv - 1.0, &s.clipped);
    s.g_est_lo = estimate(2.0 * plus_lo * inv - 1.0, nullptr);
    s.g_est_hi = estimate(2.0 * plus_hi * inv - 1.0, nullptr);
    stats[static_cast<std::size_t>(r)] = s;
  };

  const int workers = std::min(thread_count(), reps);
  if (workers <= 1) {
    for (int r = 0; r < reps; ++r) run_rep(r);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (int r = w; r < reps; r += workers) run_rep(r);
      });
    }
    for (auto& th : pool) th.join();
  }

  // Deterministic aggregation in repetition order.
  const auto empirical = [&](int skip) {
    double sum_mid = 0, sum_lo = 0, sum_hi = 0;
    long long plus_total = 0;
    int m = 0;
    for (int r = 0; r < reps; ++r) {
      if (r == skip) continue;
      const auto& s = stats[static_cast<std::size_t>(r)];
      sum_mid += s.g_est_mid;
      sum_lo += s.g_est_lo;
      sum_hi += s.g_est_hi;
      plus_total += s.plus_mid;
      ++m;
    }
    const double mean_mid = sum_mid / m;
    const double slope = (sum_hi - sum_lo) / m / (2.0 * delta);
    const double total_draws = static_cast<double>(m) * proto.draws;
    const double mean_outcome = 2.0 * plus_total / total_draws - 1.0;
    const double outcome_var =
        total_draws / (total_draws - 1.0) * (1.0 - mean_outcome * mean_outcome);
    // Delta method for Var(g_est); falls back to the sample variance of the
    // per-repetition estimates when the pooled mean itself clips.
    const double fringe = 1.0 - std::pow(proto.decay * mean_outcome, 2);
    double var_gest;
    if (fringe > 0.0) {
      const double deriv =
          proto.decay / (proto.scale * std::sqrt(fringe));
      var_gest = deriv * deriv * outcome_var / static_cast<double>(proto.draws);
    } else {
      double acc = 0;
      for (int r = 0; r < reps; ++r) {
        if (r == skip) continue;
        acc += std::pow(stats[static_cast<std::size_t>(r)].g_est_mid - mean_mid, 2);
      }
      var_gest = acc / (m - 1);
    }
    // Units-corrected deviation: scale both the spread and the residual mean
    // offset by the measured slope. The squared offset is debiased by the
    // sampling variance of the mean so an unbiased estimator reports ~0 bias.
    const double s2 = slope * slope;
    const double bias_sq = std::max(
        0.0, std::pow(mean_mid - cfg.g_true, 2) / s2 - var_gest / (m * s2));
    struct Result {
      double delta_g, slope, mean_mid;
    };
    return Result{std::sqrt(var_gest / s2 + bias_sq), slope, mean_mid};
  };

  const auto full = empirical(-1);

  EstimateReport report;
  report.g_est_mean = full.mean_mid;
  report.empirical_delta_g = full.delta_g;
  report.slope = full.slope;
  report.trials = cfg.trials;
  report.repetitions = reps;
  report.predicted_delta_g = predicted_delta_g(cfg.spec, cfg.params, cfg.trials);

  double rms_acc = 0;
  int clipped_count = 0;
  for (const auto& s : stats) {
    rms_acc += std::pow((s.g_est_mid - cfg.g_true) / full.slope, 2);
    clipped_count += s.clipped;
    report.degenerate = report.degenerate || s.degenerate;
  }
  report.delta_g_rms = std::sqrt(rms_acc / reps);
  report.clipped_fraction = static_cast<double>(clipped_count) / reps;

  double jack_mean = 0;
  std::vector<double> jack(static_cast<std::size_t>(reps));
  for (int r = 0; r < reps; ++r) {
    jack[static_cast<std::size_t>(r)] = empirical(r).delta_g;
    jack_mean += jack[static_cast<std::size_t>(r)];
  }
  jack_mean /= reps;
  double jack_var = 0;
  for (double v : jack) jack_var += (v - jack_mean) * (v - jack_mean);
  report.empirical_delta_g_stderr =
      std::sqrt(jack_var * (reps - 1) / static_cast<double>(reps));

  // Linear-arccos validity: e^{n g2 T} Delta(mean outcome) must be small.
  const double pooled_sd = std::sqrt(
      std::max(0.0, 1.0 - std::pow(2.0 * p_mid - 1.0, 2)));
  report.linearization_ok =
      proto.decay * pooled_sd / std::sqrt(static_cast<double>(proto.draws)) <=
      0.2;
  return report;
}

}  // namespace qmet
