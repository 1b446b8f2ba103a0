#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qmet/bounds.hpp"

namespace qmet {

/// Resource budget: qubits arrive at rate R and the estimate must be
/// delivered within total time tau, using at least nu_min probes.
struct Resources {
  double rate = 0;       // R, s^-1
  double tau = 0;        // s
  long long nu_min = 50;
  double gamma2 = 0;     // s^-1
  double gamma1 = 0;     // s^-1, reporting only
  double mu = 0;         // reporting only
};

class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Regime { starved, low_dec, transition, high_dec };

std::string to_string(Regime regime);

/// Chosen deployment of the budget. The continuous fields (T, n_star,
/// delta_g) reproduce the closed-form optimum; n, nu, T_realized are the
/// integer-feasible realization, with T_realized = tau - n*nu/R so the time
/// budget is met exactly.
struct Allocation {
  double T = 0;
  double n_star = 1;
  long long n = 1;
  long long nu = 0;
  long long total_qubits = 0;
  double T_realized = 0;
  Regime regime = Regime::low_dec;
  double delta_g = 0;
  double delta_g_realized = 0;
  std::optional<double> dimensionless;
};

/// Qubit-starved interaction time T_s = tau - nu_min/R.
/// Throws InfeasibleError when R tau <= nu_min.
double t_s(const Resources& res);

/// Optimal product-probe interaction time: the smaller root of
/// (g2 T)^2 - (3/2 + g2 tau)(g2 T) + g2 tau = 0, via the
/// cancellation-stable form 2 g2 tau / (b + sqrt(b^2 - 4 g2 tau)) with
/// b = 3/2 + g2 tau, polished by one Newton step. For gamma2 = 0 returns
/// the no-decoherence optimum 2 tau / 3.
double t_p(double gamma2, double tau);

Allocation optimize_product(const Resources& res);

/// Four-regime cat allocation:
///   starved    (R tau < 2 nu_min)                 : n=1, nu=nu_min, T=T_s
///   low-dec    (2a <= g2 tau < sqrt(2a))          : T=tau/2, n*=R tau/2nu_min
///   transition (sqrt(2a) <= g2 tau <= 1)          : T=tau/2, n*=1/(g2 tau)
///   high-dec   (g2 tau > 1)                       : defer to optimize_product
/// with a = nu_min gamma2 / R; cat regimes require 2a <= 1.
Allocation optimize_cat(const Resources& res);

/// Finite-difference gradient and Hessian of the cat bound
/// e^{n g2 T} / (T sqrt(n R (tau - T))) in (n, T) at an interior point.
struct HessianProbe {
  double grad_n = 0;
  double grad_T = 0;
  double det = 0;
  double trace = 0;
};

HessianProbe hessian_check(double n, double T, const Resources& res);

/// Dimensionless optimal product bound sqrt(R/g2) delta_g / g2 at a given
/// g2 tau (both branches of Eq. dec4i); nullopt when R tau <= nu_min.
std::optional<double> product_bound_dimensionless(double gamma2_tau,
                                                  double R_over_gamma2,
                                                  long long nu_min);

/// Dimensionless optimal cat bound (the four-case piecewise form);
/// nullopt when R tau <= nu_min.
std::optional<double> cat_bound_dimensionless(double gamma2_tau,
                                              double R_over_gamma2,
                                              long long nu_min);

/// Non-starved dimensionless product bound, a function of g2 tau alone.
double fig2_product_bound(double gamma2_tau);

struct Fig2Point {
  double gamma2_tau = 0;
  double gamma2_Tp = 0;
  double product_bound = 0;
};

std::vector<Fig2Point> fig2_curve(const std::vector<double>& gamma2_tau_grid);

struct Fig3Point {
  double gamma2_tau = 0;
  double sqrt_R_over_gamma2 = 0;
  std::optional<double> cat_bound;
  std::optional<double> product_bound;
  std::string regime;  // Table-I label, or "infeasible"
};

std::vector<Fig3Point> fig3_curves(
    const std::vector<double>& gamma2_tau_grid,
    const std::vector<double>& sqrt_R_over_gamma2, long long nu_min);

std::vector<double> log_spaced_grid(double lo, double hi, int points);

}  // namespace qmet
