#include "qmet/bounds.hpp"

#include <cmath>

namespace qmet {

std::string to_string(BoundForm form) {
  switch (form) {
    case BoundForm::nodec:
      return "nodec";
    case BoundForm::weak:
      return "weak";
    case BoundForm::strong:
      return "strong";
  }
  return "?";
}

BoundForm bound_form_from_string(std::string_view s) {
  if (s == "nodec") return BoundForm::nodec;
  if (s == "weak") return BoundForm::weak;
  if (s == "strong") return BoundForm::strong;
  throw ValidationError("unknown bound form '" + std::string(s) +
                        "', expected nodec, weak or strong");
}

BoundResult bound(const BoundQuery& query) {
  if (query.n < 1) throw ValidationError("bound: n must be >= 1");
  if (query.nu < 1) throw ValidationError("bound: nu must be >= 1");
  if (query.T == 0.0) {
    throw DivergentBound("bound diverges at T = 0 (no signal accumulated)");
  }
  if (!(query.T > 0.0)) throw ValidationError("bound: T must be positive");

  const double n = static_cast<double>(query.n);
  const double nu = static_cast<double>(query.nu);
  const double total = n * nu;  // N
  const double T = query.T;
  const double g1T = query.params.gamma1() * T;
  const double g2T = query.params.gamma2() * T;
  const double mu = query.params.mu();
  const double d1 = mu * (1.0 - std::exp(-g1T));

  // log delta_g, assembled per family/form; exponentials only at the end so
  // the allocator can probe extreme n gamma2 T regimes.
  double log_dg = -std::log(T) - 0.5 * std::log(total);
  switch (query.form) {
    case BoundForm::nodec:
      if (query.family == ProbeFamily::cat) {
        log_dg -= 0.5 * std::log(n);  // 1/(T n sqrt(nu)) = 1/(T sqrt(n N))
      }
      break;
    case BoundForm::weak: {
      const double arg = query.family == ProbeFamily::product
                             ? 1.0 - d1 * d1
                             : 1.0 + (n - 1.0) * std::exp(-2.0 * g1T) - d1 * d1;
      if (!(arg > 0.0)) {
        throw DivergentBound("weak bound diverges: variance factor is zero");
      }
      log_dg -= 0.5 * std::log(arg);
      break;
    }
    case BoundForm::strong:
      if (query.family == ProbeFamily::product) {
        log_dg += g2T;
      } else {
        log_dg += n * g2T - 0.5 * std::log(n);
      }
      break;
  }

  BoundResult out;
  out.log_delta_g = log_dg;
  out.delta_g = std::exp(log_dg);
  if (query.rate && query.params.gamma2() > 0.0) {
    const double g2 = query.params.gamma2();
    out.dimensionless =
        std::exp(0.5 * (std::log(*query.rate) - std::log(g2)) + log_dg -
                 std::log(g2));
  }
  return out;
}

InequalityChain weak_vs_strong_chain(double T, const ChannelParams& params) {
  if (!(T >= 0.0)) throw ValidationError("weak_vs_strong_chain: T must be >= 0");
  if (!(params.gamma2() >= 0.5 * params.gamma1()) ||
      std::abs(params.mu()) > 1.0 || params.gamma1() < 0.0) {
    throw ValidationError("weak_vs_strong_chain: params violate complete positivity");
  }
  InequalityChain out;
  const double d1 = params.mu() * (1.0 - std::exp(-params.gamma1() * T));
  out.weak_term = std::sqrt(1.0 - d1 * d1);
  out.mid_term = std::exp(-0.5 * params.gamma1() * T);
  out.strong_term = std::exp(-params.gamma2() * T);
  const double slack = 1e-12;
  out.ordered = out.weak_term >= out.mid_term - slack &&
                out.mid_term >= out.strong_term - slack;
  return out;
}

}  // namespace qmet
