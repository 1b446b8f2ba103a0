#pragma once

#include <cstdint>

#include "qmet/probes.hpp"

namespace qmet {

/// One Monte-Carlo experiment: `trials` probes are measured per estimate and
/// the experiment is repeated `repetitions` times to sample the estimator
/// distribution. Fixed seed => byte-identical report.
struct TrialConfig {
  ProbeSpec spec;
  ChannelParams params{0, 0, 0};
  long long trials = 10000;     // nu, probes per estimate
  double g_true = 0;            // s^-1
  std::uint64_t seed = 0;
  int repetitions = 30;
  /// Half-width of the slope-estimation bracket as a fraction of one fringe
  /// period 2 pi / (n T).
  double fringe_fraction = 0.005;
};

struct EstimateReport {
  double g_est_mean = 0;          // mean of the per-repetition estimates
  double empirical_delta_g = 0;   // units-corrected deviation
  double empirical_delta_g_stderr = 0;  // jackknife over repetitions
  double delta_g_rms = 0;         // literal per-repetition RMS deviation
  double predicted_delta_g = 0;   // closed-form estimator accuracy
  double slope = 0;               // d<g_est>/dg from the bracket
  double clipped_fraction = 0;    // repetitions with arccos argument clamped
  bool degenerate = false;        // some repetition had all-identical outcomes
  bool linearization_ok = true;   // e^{n g2 T} * Delta(mean) small
  long long trials = 0;
  int repetitions = 0;
};

/// P(+1) for a sigma_x measurement on one evolved probe qubit:
/// (1 + e^{-gamma2 T} cos gT) / 2.
double prob_plus_sigma_x(const ProbeSpec& spec, const ChannelParams& params);

/// P(+1) for the parity measurement Sigma_x on an evolved cat probe:
/// (1 + e^{-n gamma2 T} cos n gT) / 2.
double prob_plus_parity(const ProbeSpec& spec, const ChannelParams& params);

/// Single +-1 measurement outcomes, drawn with the counter-based generator.
int sample_sigma_x(const ProbeSpec& spec, const ChannelParams& params,
                   std::uint64_t seed);
int sample_parity(const ProbeSpec& spec, const ChannelParams& params,
                  std::uint64_t seed);

/// Runs the full experiment and evaluates the units-corrected deviation
///   delta_g^2 = Var(g_est)/S^2 + (<g_est>/|S| - g)^2,
/// with the slope S from a common-random-numbers central difference of the
/// mean estimate over +-fringe_fraction of a fringe, and Var(g_est) from the
/// delta method on the pooled outcome statistics. arccos arguments outside
/// [-1,1] are clamped and counted.
EstimateReport run_trials(const TrialConfig& cfg);

/// Nearest g' to spec.g with |sin(n g' T)| = 1, i.e. n g' T = pi/2 mod pi.
/// The physical feedback loop is abstracted to this repositioning.
double sweet_spot_offset(const ProbeSpec& spec);

/// Closed-form accuracy of the arccos estimator at the operating point
/// (product: Eq. for sigma_x averaging; cat: same with T -> nT), infinite
/// where the fringe slope vanishes.
double predicted_delta_g(const ProbeSpec& spec, const ChannelParams& params,
                         long long trials);

namespace rng {

/// SplitMix64-style counter hash: deterministic, splittable by stream/index.
std::uint64_t mix(std::uint64_t seed, std::uint64_t stream,
                  std::uint64_t index);

/// Uniform double in [0, 1) from the counter hash.
double uniform(std::uint64_t seed, std::uint64_t stream, std::uint64_t index);

}  // namespace rng

}  // namespace qmet
