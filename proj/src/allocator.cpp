#include "qmet/allocator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace qmet {

std::string to_string(Regime regime) {
  switch (regime) {
    case Regime::starved:
      return "starved";
    case Regime::low_dec:
      return "low-dec";
    case Regime::transition:
      return "transition";
    case Regime::high_dec:
      return "high-dec";
  }
  return "?";
}

namespace {

void validate(const Resources& res) {
  if (!(res.rate > 0.0)) throw ValidationError("Resources: rate must be > 0");
  if (!(res.tau > 0.0)) throw ValidationError("Resources: tau must be > 0");
  if (res.nu_min < 1) throw ValidationError("Resources: nu_min must be >= 1");
  if (!(res.gamma2 >= 0.0) || !(res.gamma1 >= 0.0)) {
    throw ValidationError("Resources: decay rates must be >= 0");
  }
  if (res.gamma2 < 0.5 * res.gamma1) {
    throw ValidationError("Resources: complete positivity requires gamma2 >= gamma1/2");
  }
  if (std::abs(res.mu) > 1.0) {
    throw ValidationError("Resources: mu must lie in [-1, 1]");
  }
}

void require_feasible(const Resources& res) {
  if (!(res.rate * res.tau > static_cast<double>(res.nu_min))) {
    throw InfeasibleError(
        "infeasible resources: R tau <= nu_min, cannot field nu_min probes "
        "within the duration tau");
  }
}

double log_cat_strong(double n, double T, double nu, double g2) {
  return n * g2 * T - std::log(T) - std::log(n) - 0.5 * std::log(nu);
}

double cat_strong_value(double n, double T, double nu, double g2) {
  return std::exp(log_cat_strong(n, T, nu, g2));
}

// floor with a one-part-in-1e9 allowance so exact budget splits do not lose
// a probe to rounding dust.
long long budget_floor(double x) {
  return static_cast<long long>(std::floor(x * (1.0 + 1e-9)));
}

struct IntegerPick {
  long long n = 1;
  long long nu = 0;
};

/// Better of floor(n*), ceil(n*) under nu = floor(R(tau-T)/n), nu >= nu_min.
IntegerPick pick_integer(double n_star, double T, const Resources& res) {
  const double budget = res.rate * (res.tau - T);
  IntegerPick best;
  double best_log = std::numeric_limits<double>::infinity();
  const long long lo = std::max<long long>(1, static_cast<long long>(std::floor(n_star)));
  const long long hi = std::max<long long>(lo, static_cast<long long>(std::ceil(n_star)));
  for (long long n = lo; n <= hi; ++n) {
    const long long nu = budget_floor(budget / static_cast<double>(n));
    if (nu < res.nu_min) continue;
    const double lg = log_cat_strong(static_cast<double>(n), T,
                                     static_cast<double>(nu), res.gamma2);
    if (lg < best_log) {
      best_log = lg;
      best = {n, nu};
    }
  }
  if (best.nu == 0) {
    // Fall back to single-qubit probes; feasibility was checked upstream.
    best.n = 1;
    best.nu = budget_floor(budget);
  }
  return best;
}

void finalize(Allocation& a, const Resources& res) {
  a.total_qubits = a.n * a.nu;
  a.T_realized = res.tau - static_cast<double>(a.total_qubits) / res.rate;
  a.delta_g_realized =
      cat_strong_value(static_cast<double>(a.n), a.T_realized,
                       static_cast<double>(a.nu), res.gamma2);
  if (res.gamma2 > 0.0) {
    a.dimensionless =
        std::sqrt(res.rate / res.gamma2) * a.delta_g / res.gamma2;
  }
}

}  // namespace

double t_s(const Resources& res) {
  validate(res);
  require_feasible(res);
  return res.tau - static_cast<double>(res.nu_min) / res.rate;
}

double t_p(double gamma2, double tau) {
  if (!(tau > 0.0)) throw ValidationError("t_p: tau must be > 0");
  if (!(gamma2 >= 0.0)) throw ValidationError("t_p: gamma2 must be >= 0");
  if (gamma2 == 0.0) return 2.0 * tau / 3.0;  // no-decoherence optimum
  const double x = gamma2 * tau;
  const double b = 1.5 + x;
  // Smaller root of y^2 - b y + x = 0; this form avoids subtractive
  // cancellation when x << 1. One Newton step tightens the residual.
  double y = 2.0 * x / (b + std::sqrt(b * b - 4.0 * x));
  const double resid = (y - b) * y + x;
  const double slope = 2.0 * y - b;
  if (slope != 0.0) y -= resid / slope;
  return y / gamma2;
}

Allocation optimize_product(const Resources& res) {
  validate(res);
  require_feasible(res);
  Allocation a;
  a.n = 1;
  a.n_star = 1.0;
  const double tp = t_p(res.gamma2, res.tau);
  const bool starved =
      res.rate * (res.tau - tp) < static_cast<double>(res.nu_min);
  if (starved) {
    a.T = t_s(res);
    a.regime = Regime::starved;
    a.nu = res.nu_min;
  } else {
    a.T = tp;
    a.regime = res.gamma2 * res.tau > 1.0 ? Regime::high_dec : Regime::low_dec;
    a.nu = budget_floor(res.rate * (res.tau - a.T));
  }
  a.delta_g = cat_strong_value(1.0, a.T, res.rate * (res.tau - a.T), res.gamma2);
  finalize(a, res);
  return a;
}

Allocation optimize_cat(const Resources& res) {
  validate(res);
  require_feasible(res);
  const double g2 = res.gamma2;
  const double nu_min = static_cast<double>(res.nu_min);

  if (g2 == 0.0) {
    Allocation a;
    if (res.rate * res.tau >= 2.0 * nu_min) {
      a.T = 0.5 * res.tau;
      a.n_star = res.rate * res.tau / (2.0 * nu_min);
      a.regime = Regime::low_dec;
      a.delta_g = 4.0 * std::sqrt(nu_min) / (res.rate * res.tau * res.tau);
      const auto pick = pick_integer(a.n_star, a.T, res);
      a.n = pick.n;
      a.nu = pick.nu;
    } else {
      a.T = t_s(res);
      a.n_star = 1.0;
      a.regime = Regime::starved;
      a.n = 1;
      a.nu = res.nu_min;
      a.delta_g = 1.0 / (a.T * std::sqrt(nu_min));
    }
    finalize(a, res);
    return a;
  }

  const double x = g2 * res.tau;
  const double two_a = 2.0 * nu_min * g2 / res.rate;

  // Cat states offer no advantage at high decoherence or when 2 nu_min
  // gamma2 / R > 1; both defer to single-qubit probes.
  if (x > 1.0 || two_a > 1.0) {
    Allocation a = optimize_product(res);
    if (a.regime != Regime::starved) a.regime = Regime::high_dec;
    return a;
  }

  Allocation a;
  if (x < two_a) {
    a.T = t_s(res);
    a.n_star = 1.0;
    a.regime = Regime::starved;
    a.n = 1;
    a.nu = res.nu_min;
    a.delta_g = cat_strong_value(1.0, a.T, nu_min, g2);
  } else if (x < std::sqrt(two_a)) {
    a.T = 0.5 * res.tau;
    a.n_star = res.rate * res.tau / (2.0 * nu_min);
    a.regime = Regime::low_dec;
    a.delta_g = 4.0 * std::sqrt(nu_min) / (res.rate * res.tau * res.tau) *
                std::exp(g2 * res.rate * res.tau * res.tau / (4.0 * nu_min));
    const auto pick = pick_integer(a.n_star, a.T, res);
    a.n = pick.n;
    a.nu = pick.nu;
  } else {
    a.T = 0.5 * res.tau;
    a.n_star = 1.0 / x;
    a.regime = Regime::transition;
    a.delta_g = 2.0 * std::sqrt(2.0 * std::numbers::e) /
                (res.tau * std::sqrt(res.rate / g2));
    const auto pick = pick_integer(a.n_star, a.T, res);
    a.n = pick.n;
    a.nu = pick.nu;
  }
  finalize(a, res);
  return a;
}

HessianProbe hessian_check(double n, double T, const Resources& res) {
  validate(res);
  if (!(n >= 1.0) || !(T > 0.0) || !(T < res.tau)) {
    throw ValidationError("hessian_check: point must be interior");
  }
  const auto f = [&](double nn, double tt) {
    return cat_strong_value(nn, tt, res.rate * (res.tau - tt) / nn, res.gamma2);
  };
  const double hn = 1e-4 * std::max(1.0, n);
  const double ht = 1e-4 * T;
  HessianProbe out;
  out.grad_n = (f(n + hn, T) - f(n - hn, T)) / (2.0 * hn);
  out.grad_T = (f(n, T + ht) - f(n, T - ht)) / (2.0 * ht);
  const double f0 = f(n, T);
  const double fnn = (f(n + hn, T) - 2.0 * f0 + f(n - hn, T)) / (hn * hn);
  const double ftt = (f(n, T + ht) - 2.0 * f0 + f(n, T - ht)) / (ht * ht);
  const double fnt = (f(n + hn, T + ht) - f(n + hn, T - ht) -
                      f(n - hn, T + ht) + f(n - hn, T - ht)) /
                     (4.0 * hn * ht);
  out.det = fnn * ftt - fnt * fnt;
  out.trace = fnn + ftt;
  return out;
}

namespace {

/// Dimensionless product bound at x = g2 tau; starved branch when the
/// optimal interaction time cannot leave room for nu_min qubits.
std::optional<double> product_dimensionless_impl(double x, double r_over_g2,
                                                 double nu_min) {
  const double a = nu_min / r_over_g2;  // nu_min gamma2 / R
  if (!(x > a)) return std::nullopt;
  const double y_p = t_p(1.0, x);  // gamma2 T_p in dimensionless form
  if (x - y_p >= a) {
    return std::exp(y_p) / (y_p * std::sqrt(x - y_p));
  }
  const double y_s = x - a;
  return std::sqrt(r_over_g2) * std::exp(y_s) / (y_s * std::sqrt(nu_min));
}

struct CatPiece {
  Regime regime;
  double value;
};

std::optional<CatPiece> cat_dimensionless_impl(double x, double r_over_g2,
                                               double nu_min) {
  const double a = nu_min / r_over_g2;
  if (!(x > a)) return std::nullopt;
  const double two_a = 2.0 * a;
  if (x > 1.0 || two_a > 1.0) {
    const auto value = product_dimensionless_impl(x, r_over_g2, nu_min);
    if (!value) return std::nullopt;
    const double y_p = t_p(1.0, x);
    return CatPiece{x - y_p >= a ? Regime::high_dec : Regime::starved, *value};
  }
  if (x < two_a) {
    const double y_s = x - a;
    return CatPiece{Regime::starved, std::sqrt(r_over_g2) * std::exp(y_s) /
                                         (y_s * std::sqrt(nu_min))};
  }
  if (x < std::sqrt(two_a)) {
    return CatPiece{Regime::low_dec,
                    4.0 * std::sqrt(nu_min) / (std::sqrt(r_over_g2) * x * x) *
                        std::exp(r_over_g2 * x * x / (4.0 * nu_min))};
  }
  return CatPiece{Regime::transition, 2.0 * std::sqrt(2.0 * std::numbers::e) / x};
}

}  // namespace

std::optional<double> product_bound_dimensionless(double gamma2_tau,
                                                  double R_over_gamma2,
                                                  long long nu_min) {
  return product_dimensionless_impl(gamma2_tau, R_over_gamma2,
                                    static_cast<double>(nu_min));
}

std::optional<double> cat_bound_dimensionless(double gamma2_tau,
                                              double R_over_gamma2,
                                              long long nu_min) {
  const auto piece = cat_dimensionless_impl(gamma2_tau, R_over_gamma2,
                                            static_cast<double>(nu_min));
  if (!piece) return std::nullopt;
  return piece->value;
}

double fig2_product_bound(double gamma2_tau) {
  const double y = t_p(1.0, gamma2_tau);
  return std::exp(y) / (y * std::sqrt(gamma2_tau - y));
}

std::vector<Fig2Point> fig2_curve(const std::vector<double>& gamma2_tau_grid) {
  std::vector<Fig2Point> out;
  out.reserve(gamma2_tau_grid.size());
  for (double x : gamma2_tau_grid) {
    out.push_back({x, t_p(1.0, x), fig2_product_bound(x)});
  }
  return out;
}

std::vector<Fig3Point> fig3_curves(
    const std::vector<double>& gamma2_tau_grid,
    const std::vector<double>& sqrt_R_over_gamma2, long long nu_min) {
  std::vector<Fig3Point> out;
  out.reserve(gamma2_tau_grid.size() * sqrt_R_over_gamma2.size());
  for (double s : sqrt_R_over_gamma2) {
    const double r_over_g2 = s * s;
    for (double x : gamma2_tau_grid) {
      Fig3Point p;
      p.gamma2_tau = x;
      p.sqrt_R_over_gamma2 = s;
      const auto piece =
          cat_dimensionless_impl(x, r_over_g2, static_cast<double>(nu_min));
      if (piece) {
        p.cat_bound = piece->value;
        p.regime = to_string(piece->regime);
      } else {
        p.regime = "infeasible";
      }
      p.product_bound = product_bound_dimensionless(x, r_over_g2, nu_min);
      out.push_back(std::move(p));
    }
  }
  return out;
}

std::vector<double> log_spaced_grid(double lo, double hi, int points) {
  if (!(lo > 0.0) || !(hi > lo) || points < 2) {
    throw ValidationError("log_spaced_grid: need 0 < lo < hi and points >= 2");
  }
  std::vector<double> out(points);
  const double step = (std::log(hi) - std::log(lo)) / (points - 1);
  for (int i = 0; i < points; ++i) {
    out[i] = std::exp(std::log(lo) + i * step);
  }
  out.front() = lo;
  out.back() = hi;
  return out;
}

}  // namespace qmet
