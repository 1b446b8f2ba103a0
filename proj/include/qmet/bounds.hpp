#pragma once

#include <optional>
#include <string>

#include "qmet/channel.hpp"
#include "qmet/probes.hpp"

namespace qmet {

enum class BoundForm { nodec, weak, strong };

std::string to_string(BoundForm form);
BoundForm bound_form_from_string(std::string_view s);

/// Divergent or otherwise ill-posed bound request (e.g. T = 0).
class DivergentBound : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

struct BoundQuery {
  ProbeFamily family = ProbeFamily::product;
  BoundForm form = BoundForm::nodec;
  int n = 1;            // qubits per probe
  long long nu = 1;     // probe count; N = n * nu
  double T = 1.0;       // interaction time, s
  ChannelParams params{0, 0, 0};
  /// Qubit supply rate R; when set (with gamma2 > 0) the result carries the
  /// dimensionless form sqrt(R/gamma2) * delta_g / gamma2.
  std::optional<double> rate;
};

struct BoundResult {
  double delta_g = 0;      // s^-1
  double log_delta_g = 0;  // natural log; safe at large n gamma2 T
  std::optional<double> dimensionless;
};

/// Closed-form lower bounds on delta g:
///   product/nodec : 1/(T sqrt(N))
///   cat/nodec     : 1/(T n sqrt(nu))
///   product/weak  : (1/(T sqrt(N))) (1 - mu^2 (1-e^{-g1 T})^2)^{-1/2}
///   cat/weak      : (1/(T sqrt(N))) (1 + (n-1)e^{-2 g1 T} - mu^2(1-e^{-g1 T})^2)^{-1/2}
///   product/strong: e^{g2 T} / (T sqrt(N))
///   cat/strong    : e^{n g2 T} / (T n sqrt(nu))
/// Computed in log space; T = 0 is rejected as an explicit divergence.
BoundResult bound(const BoundQuery& query);

/// The three terms of the inequality chain
///   sqrt(1 - mu^2 (1-e^{-g1 T})^2) >= e^{-g1 T/2} >= e^{-g2 T},
/// the last step using complete positivity (gamma2 >= gamma1/2).
struct InequalityChain {
  double weak_term = 1;
  double mid_term = 1;
  double strong_term = 1;
  bool ordered = true;
};

InequalityChain weak_vs_strong_chain(double T, const ChannelParams& params);

}  // namespace qmet
