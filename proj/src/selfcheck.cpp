#include "qmet/selfcheck.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "qmet/allocator.hpp"
#include "qmet/bounds.hpp"
#include "qmet/channel.hpp"
#include "qmet/fisher.hpp"
#include "qmet/montecarlo.hpp"
#include "qmet/pauli.hpp"
#include "qmet/probes.hpp"

namespace qmet {

namespace {

struct Draw {
  std::mt19937_64 eng;
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> unit{0.0, 1.0};

  explicit Draw(std::uint64_t seed) : eng(seed) {}

  double normal() { return gauss(eng); }
  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(eng); }

  Matrix complex_gaussian(Eigen::Index dim) {
    Matrix m(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
      for (Eigen::Index j = 0; j < dim; ++j) {
        m(i, j) = Complex(normal(), normal());
      }
    }
    return m;
  }

  HermitianMatrix hermitian(Eigen::Index dim) {
    Matrix a = complex_gaussian(dim);
    return HermitianMatrix(0.5 * (a + a.adjoint().eval()));
  }

  HermitianMatrix traceless_hermitian(Eigen::Index dim) {
    Matrix h = hermitian(dim).mat();
    h -= (h.trace() / static_cast<double>(dim)) * Matrix::Identity(dim, dim);
    return HermitianMatrix(std::move(h));
  }

  DensityOperator density(int n_qubits) {
    const Eigen::Index dim = Eigen::Index{1} << n_qubits;
    Matrix b = complex_gaussian(dim);
    Matrix rho = b * b.adjoint();
    rho += 0.05 * rho.trace().real() / static_cast<double>(dim) *
           Matrix::Identity(dim, dim);
    rho /= rho.trace().real();
    return DensityOperator(HermitianMatrix(std::move(rho)), n_qubits);
  }

  DensityOperator qubit_density() {
    // Bloch ball draw, radius capped away from the surface.
    const double r = 0.95 * std::cbrt(unit(eng));
    const double ct = uniform(-1.0, 1.0);
    const double st = std::sqrt(1.0 - ct * ct);
    const double phi = uniform(0.0, 2.0 * std::numbers::pi);
    Matrix rho = 0.5 * (identity2() + r * st * std::cos(phi) * sigma_x() +
                        r * st * std::sin(phi) * sigma_y() + r * ct * sigma_z());
    return DensityOperator(HermitianMatrix(std::move(rho)), 1);
  }

  DensityOperator pure(int n_qubits) {
    const Eigen::Index dim = Eigen::Index{1} << n_qubits;
    Eigen::VectorXcd v(dim);
    for (Eigen::Index i = 0; i < dim; ++i) v(i) = Complex(normal(), normal());
    v.normalize();
    return DensityOperator(HermitianMatrix(v * v.adjoint()), n_qubits);
  }

  ChannelParams cp_params(double t_scale = 1.0) {
    const double g2 = uniform(0.0, 1.5) / t_scale;
    const double g1 = uniform(0.0, 2.0 * g2);
    return ChannelParams(g1, g2, uniform(-1.0, 1.0), 0.0);
  }
};

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << v;
  return os.str();
}

class Suite {
 public:
  explicit Suite(const SelfCheckOptions& opts) : opts_(opts) {}

  void record(const std::string& name, bool pass, double worst,
              const std::string& extra = "") {
    CheckResult r;
    r.name = name;
    r.pass = pass;
    r.detail = "worst deviation " + fmt(worst) + extra;
    results_.push_back(std::move(r));
  }

  std::vector<CheckResult> take() { return std::move(results_); }

  const SelfCheckOptions& opts() const { return opts_; }

 private:
  SelfCheckOptions opts_;
  std::vector<CheckResult> results_;
};

void check_qcore(Suite& suite) {
  const auto& opts = suite.opts();
  Draw draw(opts.seed);

  double worst_sld = 0, worst_bridge = 0, worst_chain = 0, worst_pure = 0;
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 1 + static_cast<int>(draw.uniform(0, opts.n_max));
    const auto rho = draw.density(n);
    const auto drho = draw.traceless_hermitian(rho.dim());
    const auto l = sld(rho, drho);
    const Matrix resid = 0.5 * (rho.mat() * l.mat() + l.mat() * rho.mat()) -
                         drho.mat();
    worst_sld = std::max(worst_sld,
                         resid.norm() / std::max(1.0, drho.mat().norm()));

    const auto h = draw.hermitian(rho.dim());
    const double dsq = delta_sq(rho, h);
    const double var = variance(rho, h);
    worst_chain = std::max(worst_chain, dsq - var);
    for (double T : {0.1, 1.0, 3.0}) {
      const double lhs = qfi(rho, commutator_deriv(rho, h, T));
      const double rhs = 4.0 * T * T * dsq;
      worst_bridge = std::max(
          std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)), worst_bridge);
    }

    const auto psi = draw.pure(std::min(n, 3));
    const auto hp = draw.hermitian(psi.dim());
    worst_pure = std::max(worst_pure,
                          std::abs(delta_sq(psi, hp) - variance(psi, hp)) /
                              std::max(1.0, variance(psi, hp)));
  }
  suite.record("qcore/sld-consistency", worst_sld <= 1e-8, worst_sld);
  suite.record("qcore/qfi-delta-bridge", worst_bridge <= 1e-8, worst_bridge);
  suite.record("qcore/monotone-chain", worst_chain <= 1e-10, worst_chain);
  suite.record("qcore/pure-state-equality", worst_pure <= 1e-9, worst_pure);

  // Appendix-A additivity: QFI of a product state is the sum of the
  // single-qubit QFIs; identical factors scale linearly in n.
  double worst_add = 0, worst_scale = 0;
  for (int trial = 0; trial < 25; ++trial) {
    const int n = 2 + static_cast<int>(draw.uniform(0, std::min(opts.n_max, 4) - 1));
    std::vector<DensityOperator> factors;
    double sum_single = 0;
    Matrix prod = Matrix::Identity(1, 1);
    const HermitianMatrix hj = HermitianMatrix(0.5 * sigma_z());
    for (int j = 0; j < n; ++j) {
      factors.push_back(draw.qubit_density());
      prod = kron(prod, factors.back().mat());
      sum_single += qfi(factors[j], commutator_deriv(factors[j], hj, 1.0));
    }
    const DensityOperator rho_p(HermitianMatrix(std::move(prod)), n);
    const auto h = collective_h(n);
    const double total = qfi(rho_p, commutator_deriv(rho_p, h, 1.0));
    worst_add = std::max(worst_add, std::abs(total - sum_single) /
                                        std::max(1.0, sum_single));

    Matrix same = Matrix::Identity(1, 1);
    for (int j = 0; j < n; ++j) same = kron(same, factors[0].mat());
    const DensityOperator rho_same(HermitianMatrix(std::move(same)), n);
    const double total_same = qfi(rho_same, commutator_deriv(rho_same, h, 1.0));
    const double single =
        qfi(factors[0], commutator_deriv(factors[0], hj, 1.0));
    worst_scale = std::max(worst_scale, std::abs(total_same - n * single) /
                                            std::max(1.0, n * single));
  }
  suite.record("qcore/additivity", worst_add <= 1e-8, worst_add);
  suite.record("qcore/additivity-scaling", worst_scale <= 1e-8, worst_scale);
}

void check_channel(Suite& suite) {
  Draw draw(suite.opts().seed + 1);

  double worst_semi = 0, worst_cov = 0, worst_fix = 0, worst_tr = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const auto params = draw.cp_params().with_omega(draw.uniform(-2.0, 2.0));
    const double t1 = draw.uniform(0.0, 1.5);
    const double t2 = draw.uniform(0.0, 1.5);
    BlochVector v;
    v.x = draw.uniform(-0.57, 0.57);
    v.y = draw.uniform(-0.57, 0.57);
    v.z = draw.uniform(-0.57, 0.57);
    const auto two_step = apply_bloch(params, t2, apply_bloch(params, t1, v));
    const auto direct = apply_bloch(params, t1 + t2, v);
    worst_semi = std::max({worst_semi, std::abs(two_step.x - direct.x),
                           std::abs(two_step.y - direct.y),
                           std::abs(two_step.z - direct.z)});

    const auto fixed = apply_bloch(params, t1, BlochVector(0, 0, params.mu()));
    worst_fix = std::max({worst_fix, std::abs(fixed.x), std::abs(fixed.y),
                          std::abs(fixed.z - params.mu())});

    const auto rho = draw.qubit_density();
    const double phi = draw.uniform(0.0, 2.0 * std::numbers::pi);
    Matrix u(2, 2);
    u << std::exp(Complex(0, -0.5 * phi)), 0, 0, std::exp(Complex(0, 0.5 * phi));
    const DensityOperator rot(HermitianMatrix(u * rho.mat() * u.adjoint()), 1);
    const auto lhs = apply_qubit(params, t1, rot);
    const auto rhs_inner = apply_qubit(params, t1, rho);
    const Matrix rhs = u * rhs_inner.mat() * u.adjoint();
    worst_cov = std::max(worst_cov, (lhs.mat() - rhs).norm());
    worst_tr = std::max(worst_tr, std::abs(lhs.mat().trace().real() - 1.0));
  }
  suite.record("channel/semigroup", worst_semi <= 1e-12, worst_semi);
  suite.record("channel/rotation-covariance", worst_cov <= 1e-10, worst_cov);
  suite.record("channel/fixed-point", worst_fix <= 1e-12, worst_fix);
  suite.record("channel/trace-preservation", worst_tr <= 1e-13, worst_tr);

  double min_cp_eig = 1.0;
  double worst_violation = 1.0;
  const auto tgrid = log_spaced_grid(1e-3, 5.0, 40);
  for (double mu : {0.0, 1.0, -1.0}) {
    for (double ratio : {0.5, 1.0, 2.0}) {
      // ratio = gamma2/gamma1; CP requires ratio >= 1/2.
      for (double t : tgrid) {
        const auto ok = ChannelParams(1.0, ratio, mu);
        min_cp_eig = std::min(min_cp_eig, choi_psd_check(ok, t).min_eigenvalue);
      }
    }
    const auto bad = ChannelParams::unchecked(1.0, 0.3, mu);
    for (double t : tgrid) {
      worst_violation =
          std::min(worst_violation, choi_psd_check(bad, t).min_eigenvalue);
    }
  }
  suite.record("channel/choi-psd-valid", min_cp_eig >= -1e-10, min_cp_eig);
  suite.record("channel/choi-flags-invalid", worst_violation < -1e-6,
               worst_violation);
}

void check_probes(Suite& suite) {
  const auto& opts = suite.opts();
  double worst_closed = 0, worst_mom = 0, worst_evolve = 0, worst_spec = 0,
         worst_block = 0;
  const double ratios[] = {0.0, 0.5, 1.0};
  const double mus[] = {0.0, 0.5, 1.0};
  const double g2Ts[] = {0.1, 0.7, 2.0};
  for (ProbeFamily family : {ProbeFamily::product, ProbeFamily::cat}) {
    for (int n = 1; n <= opts.n_max; ++n) {
      for (double ratio : ratios) {
        for (double mu : mus) {
          for (double g2T : g2Ts) {
            const double T = 1.0;
            const ChannelParams params(ratio * g2T, g2T, mu, 0.0);
            const ProbeSpec spec(family, n, T, 0.9);
            const auto rho = evolve(spec, params);
            const auto h = collective_h(n);

            const double closed = delta_sq_closed(spec, params);
            const double brute = delta_sq(rho, h);
            worst_closed =
                std::max(worst_closed, std::abs(closed - brute) /
                                           std::max(1e-30, std::abs(brute)));

            const auto alt = apply_nqubit(params.with_omega(spec.g), T,
                                          build_initial(spec));
            worst_evolve =
                std::max(worst_evolve, (alt.mat() - rho.mat()).norm());

            const auto g_zero = evolve(ProbeSpec(family, n, T, 0.0), params);
            const auto ev_a = eig_hermitian(rho.hermitian()).eigenvalues;
            const auto ev_b = eig_hermitian(g_zero.hermitian()).eigenvalues;
            worst_spec =
                std::max(worst_spec, (ev_a - ev_b).cwiseAbs().maxCoeff());

            if (family == ProbeFamily::cat) {
              const auto mom = cat_moments(n, T, params);
              worst_mom = std::max(
                  {worst_mom, std::abs(mom.mean_h - expectation(rho, h)),
                   std::abs(mom.mean_h2 -
                            (rho.mat() * h.mat() * h.mat()).trace().real()),
                   std::abs(mom.var_h - variance(rho, h))});
              const Eigen::Index dim = rho.dim();
              for (Eigen::Index r = 0; r < dim; ++r) {
                for (Eigen::Index c = 0; c < dim; ++c) {
                  const bool corner = (r == 0 && c == dim - 1) ||
                                      (r == dim - 1 && c == 0);
                  if (r != c && !corner) {
                    worst_block = std::max(worst_block, std::abs(rho.mat()(r, c)));
                  }
                }
              }
            }
          }
        }
      }
    }
  }
  suite.record("probes/delta-sq-closed-vs-brute", worst_closed <= opts.rel_tol,
               worst_closed);
  suite.record("probes/cat-moments-vs-trace", worst_mom <= 1e-9, worst_mom);
  suite.record("probes/evolve-vs-channel", worst_evolve <= 1e-10, worst_evolve);
  suite.record("probes/spectrum-g-independent", worst_spec <= 1e-10, worst_spec);
  suite.record("probes/cat-block-structure", worst_block <= 1e-12, worst_block);
}

void check_bounds(Suite& suite) {
  Draw draw(suite.opts().seed + 2);

  double worst_red = 0, worst_order = 0, worst_cross = 0, worst_cat1 = 0;
  bool chain_ok = true;
  for (int trial = 0; trial < 300; ++trial) {
    const auto params = draw.cp_params();
    const int n = 1 + static_cast<int>(draw.uniform(0, 6));
    const long long nu = 10 + static_cast<long long>(draw.uniform(0, 500));
    const double T = draw.uniform(0.05, 3.0);
    for (ProbeFamily family : {ProbeFamily::product, ProbeFamily::cat}) {
      BoundQuery q{family, BoundForm::nodec, n, nu, T, params, std::nullopt};
      const ChannelParams no_dec(0, 0, params.mu());
      BoundQuery q0 = q;
      q0.params = no_dec;
      for (BoundForm form : {BoundForm::nodec, BoundForm::weak, BoundForm::strong}) {
        q0.form = form;
        worst_red = std::max(
            worst_red, std::abs(bound(q0).delta_g - bound(q).delta_g) /
                           bound(q).delta_g);
      }
      q.form = BoundForm::weak;
      const double weak = bound(q).delta_g;
      q.form = BoundForm::strong;
      const double strong = bound(q).delta_g;
      worst_order = std::max(worst_order, (weak - strong) / strong);
    }
    chain_ok = chain_ok && weak_vs_strong_chain(T, params).ordered;

    // Strong bounds vs spectral Delta^2 at gamma1 = 0, both families.
    const ChannelParams dephase(0.0, params.gamma2(), 0.0);
    for (ProbeFamily family : {ProbeFamily::product, ProbeFamily::cat}) {
      const ProbeSpec spec(family, n, T, 0.0);
      const double dsq = delta_sq_closed(spec, dephase);
      const double ref =
          1.0 / (std::sqrt(static_cast<double>(nu)) * 2.0 * T * std::sqrt(dsq));
      BoundQuery q{family, BoundForm::strong, n, nu, T, dephase, std::nullopt};
      worst_cross =
          std::max(worst_cross, std::abs(bound(q).delta_g - ref) / ref);
    }

    // cat/strong at n=1 must equal product/strong at N = nu.
    BoundQuery qc{ProbeFamily::cat, BoundForm::strong, 1, nu, T, params,
                  std::nullopt};
    BoundQuery qp{ProbeFamily::product, BoundForm::strong, 1, nu, T, params,
                  std::nullopt};
    worst_cat1 = std::max(worst_cat1,
                          std::abs(bound(qc).delta_g - bound(qp).delta_g) /
                              bound(qp).delta_g);
  }
  suite.record("bounds/nodec-reduction", worst_red <= 1e-15, worst_red);
  suite.record("bounds/strong-ge-weak", worst_order <= 1e-12, worst_order);
  suite.record("bounds/inequality-chain", chain_ok, 0.0);
  suite.record("bounds/cross-consistency-dephasing", worst_cross <= 1e-12,
               worst_cross);
  suite.record("bounds/cat-n1-equals-product", worst_cat1 <= 1e-15, worst_cat1);
}

void check_allocator(Suite& suite) {
  // T_p: quadratic residual and asymptotic limits.
  double worst_resid = 0;
  for (double x : log_spaced_grid(1e-3, 1e3, 120)) {
    const double y = t_p(1.0, x);
    worst_resid = std::max(worst_resid, std::abs((y - (1.5 + x)) * y + x));
  }
  const double small_ratio = t_p(1.0, 1e-4) / 1e-4;
  const double large_y = t_p(1.0, 1e4);
  const bool tp_ok = worst_resid <= 1e-12 &&
                     std::abs(t_p(1.0, 1.0) - 0.5) <= 1e-12 &&
                     std::abs(small_ratio - 2.0 / 3.0) <= 0.01 &&
                     std::abs(large_y - 1.0) <= 0.02;
  suite.record("allocator/t-p-root", tp_ok, worst_resid);

  // Piecewise bound continuity at the three regime boundaries.
  double worst_cont = 0;
  for (double sqrt_rg : {100.0, 1000.0}) {
    const double rg = sqrt_rg * sqrt_rg;
    const double nu_min = 50;
    const double eps = 1e-9;
    for (double edge : {2.0 * nu_min / rg, std::sqrt(2.0 * nu_min / rg), 1.0}) {
      const double lo = *cat_bound_dimensionless(edge * (1.0 - eps), rg, 50);
      const double hi = *cat_bound_dimensionless(edge * (1.0 + eps), rg, 50);
      worst_cont = std::max(worst_cont, std::abs(hi - lo) / lo);
    }
  }
  suite.record("allocator/boundary-continuity", worst_cont <= 1e-7, worst_cont);

  // Allocation against a coarse exhaustive (T, n) search.
  double worst_gap = 0;
  for (double sqrt_rg : {100.0}) {
    const double rg = sqrt_rg * sqrt_rg;
    for (double x : {0.007, 0.05, 0.5, 2.0}) {
      Resources res{rg, x, 50, 1.0, 0.0, 0.0};
      const auto alloc = optimize_cat(res);
      double best = std::numeric_limits<double>::infinity();
      for (int i = 1; i < 400; ++i) {
        const double T = res.tau * i / 400.0;
        const double budget = res.rate * (res.tau - T);
        const long long n_hi = static_cast<long long>(budget / 50.0);
        for (long long n = 1; n <= std::max<long long>(1, n_hi); ++n) {
          const long long nu = static_cast<long long>(budget / static_cast<double>(n));
          if (nu < 50) break;
          const double lg = n * res.gamma2 * T - std::log(T) -
                            std::log(static_cast<double>(n)) -
                            0.5 * std::log(static_cast<double>(nu));
          best = std::min(best, lg);
        }
      }
      worst_gap = std::max(worst_gap, std::log(alloc.delta_g) - best);
    }
  }
  suite.record("allocator/grid-search-oracle", worst_gap <= 0.005, worst_gap,
               " (log gap)");
}

}  // namespace

std::vector<CheckResult> run_selfcheck(const SelfCheckOptions& opts) {
  if (opts.n_max < 1 || opts.n_max > kMaxBruteQubits) {
    throw ValidationError("selfcheck: n_max must lie in [1, " +
                          std::to_string(kMaxBruteQubits) + "]");
  }
  Suite suite(opts);
  check_qcore(suite);
  check_channel(suite);
  check_probes(suite);
  check_bounds(suite);
  check_allocator(suite);
  return suite.take();
}

}  // namespace qmet
