#include <doctest.h>

#include <cmath>
#include <numbers>

#include "helpers.hpp"
#include "qmet/allocator.hpp"
#include "qmet/channel.hpp"
#include "qmet/pauli.hpp"
#include "qmet/probes.hpp"

using namespace qmet;
using qmet::testing::Rand;

TEST_CASE("ChannelParams enforces the complete-positivity conditions") {
  CHECK_THROWS_AS(ChannelParams(1.0, 0.4, 0.0), ValidationError);
  CHECK_THROWS_AS(ChannelParams(1.0, 1.0, 1.5), ValidationError);
  CHECK_THROWS_AS(ChannelParams(-0.1, 1.0, 0.0), ValidationError);
  CHECK_NOTHROW(ChannelParams(1.0, 0.5, 1.0));
  CHECK_NOTHROW(ChannelParams::unchecked(1.0, 0.1, 0.0));
}

TEST_CASE("apply_bloch fixed values") {
  const BlochVector v(0.3, -0.2, 0.4);
  SUBCASE("t = 0 is the identity") {
    const auto params = ChannelParams(0.7, 0.9, 0.5, 1.3);
    const auto out = apply_bloch(params, 0.0, v);
    CHECK(out.x == doctest::Approx(v.x));
    CHECK(out.y == doctest::Approx(v.y));
    CHECK(out.z == doctest::Approx(v.z));
  }
  SUBCASE("long times decay to the fixed point (0, 0, mu)") {
    const auto params = ChannelParams(0.7, 0.9, -0.6, 1.3);
    const auto out = apply_bloch(params, 1e5, v);
    CHECK(out.x == doctest::Approx(0.0));
    CHECK(out.y == doctest::Approx(0.0));
    CHECK(out.z == doctest::Approx(-0.6));
  }
  SUBCASE("pole trajectory at mu = 3/4, gamma1 = 3 gamma2 / 4, gamma2 t = pi/4") {
    const double g2 = 1.0;
    const auto params = ChannelParams(0.75 * g2, g2, 0.75);
    const double t = std::numbers::pi / 4.0;
    const auto out = apply_bloch(params, t, BlochVector(0, 0, 1));
    const double e1 = std::exp(-3.0 * std::numbers::pi / 16.0);
    CHECK(out.z == doctest::Approx(e1 + 0.75 * (1.0 - e1)).epsilon(1e-14));
    CHECK(out.x == doctest::Approx(0.0));
  }
  SUBCASE("negative time rejected") {
    CHECK_THROWS_AS(apply_bloch(ChannelParams(0, 0, 0), -0.1, v),
                    ValidationError);
  }
  SUBCASE("equatorial rotation sense matches the evolved product state") {
    // omega t = pi/2 turns +x into +y.
    const auto params = ChannelParams(0, 0, 0, std::numbers::pi / 2.0);
    const auto out = apply_bloch(params, 1.0, BlochVector(1, 0, 0));
    CHECK(out.x == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(out.y == doctest::Approx(1.0));
  }
}

TEST_CASE("apply_qubit fixed values") {
  SUBCASE("maximally mixed state is invariant at mu = 0") {
    const DensityOperator mixed(HermitianMatrix(0.5 * identity2().eval()), 1);
    const auto params = ChannelParams(0.8, 0.9, 0.0, 0.4);
    for (double t : {0.0, 0.3, 2.0, 50.0}) {
      const auto out = apply_qubit(params, t, mixed);
      CHECK((out.mat() - mixed.mat()).norm() <= 1e-14);
    }
  }
  SUBCASE("equatorial state, omega = 0, gamma2 t = 1") {
    const double g2 = 1.0, g1 = 0.5, mu = 0.7;
    const auto params = ChannelParams(g1, g2, mu, 0.0);
    const DensityOperator rho(HermitianMatrix(0.5 * (identity2() + sigma_x())), 1);
    const auto out = apply_qubit(params, 1.0, rho);
    const Matrix expect =
        0.5 * (identity2() + std::exp(-1.0) * sigma_x() +
               mu * (1.0 - std::exp(-g1)) * sigma_z());
    CHECK((out.mat() - expect).norm() <= 1e-14);
  }
  SUBCASE("pure |0> decays to Bloch z = 1/2 after gamma1 t = ln 2 at mu = 0") {
    const double g1 = std::log(2.0);
    const auto params = ChannelParams(g1, g1, 0.0);
    Matrix zero = Matrix::Zero(2, 2);
    zero(0, 0) = 1.0;
    const auto out = apply_qubit(params, 1.0, DensityOperator(HermitianMatrix(zero), 1));
    CHECK((out.mat()(0, 0) - out.mat()(1, 1)).real() == doctest::Approx(0.5));
  }
  SUBCASE("wrong dimension rejected") {
    const DensityOperator two(HermitianMatrix(0.25 * Matrix::Identity(4, 4)), 2);
    CHECK_THROWS_AS(apply_qubit(ChannelParams(0, 0, 0), 1.0, two),
                    ValidationError);
  }
}

TEST_CASE("apply_nqubit factorizes and matches the closed forms") {
  Rand rand(31);
  SUBCASE("product input evolves to the tensor product of qubit outputs") {
    for (int trial = 0; trial < 5; ++trial) {
      const auto params = rand.cp_params().with_omega(rand.uniform(-1.0, 1.0));
      const double t = rand.uniform(0.1, 1.5);
      std::vector<DensityOperator> qubits;
      Matrix prod = Matrix::Identity(1, 1);
      Matrix prod_out = Matrix::Identity(1, 1);
      for (int j = 0; j < 3; ++j) {
        qubits.push_back(rand.qubit_density());
        prod = kron(prod, qubits.back().mat());
        prod_out = kron(prod_out, apply_qubit(params, t, qubits.back()).mat());
      }
      const DensityOperator rho(HermitianMatrix(std::move(prod)), 3);
      const auto out = apply_nqubit(params, t, rho);
      CHECK((out.mat() - prod_out).norm() <= 1e-12);
    }
  }
  SUBCASE("cat input matches the evolved closed form") {
    for (int n : {2, 3, 5}) {
      const ChannelParams params(0.4, 0.6, 0.3, 0.0);
      const ProbeSpec spec(ProbeFamily::cat, n, 0.8, 1.1);
      const auto closed = evolve(spec, params);
      const auto swept = apply_nqubit(params.with_omega(spec.g), spec.T,
                                      build_initial(spec));
      CHECK((closed.mat() - swept.mat()).norm() <= 1e-10);
    }
  }
  SUBCASE("t = 0 is the identity") {
    const auto rho = rand.density(3);
    const auto out = apply_nqubit(ChannelParams(0.3, 0.8, 0.4, 0.9), 0.0, rho);
    CHECK((out.mat() - rho.mat()).norm() <= 1e-14);
  }
  SUBCASE("cap enforced") {
    const ProbeSpec spec(ProbeFamily::product, 6, 1.0, 0.0);
    CHECK_NOTHROW(apply_nqubit(ChannelParams(0, 0.1, 0), 0.5, build_initial(spec)));
    CHECK_THROWS_AS(build_initial(ProbeSpec(ProbeFamily::product, 7, 1.0, 0.0)),
                    ValidationError);
  }
  SUBCASE("agrees with the Kraus-decomposition oracle") {
    for (int trial = 0; trial < 5; ++trial) {
      const auto params = rand.cp_params().with_omega(rand.uniform(-1.0, 1.0));
      const double t = rand.uniform(0.05, 1.2);
      const auto rho = rand.density(3);
      const auto fast = apply_nqubit(params, t, rho);
      const auto oracle = qmet::testing::apply_channel_kraus(params, t, rho);
      CHECK((fast.mat() - oracle.mat()).norm() <= 1e-10);
    }
  }
}

TEST_CASE("channel properties on random draws") {
  Rand rand(37);
  double worst_semi = 0, worst_cov = 0, worst_tr = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const auto params = rand.cp_params().with_omega(rand.uniform(-2.0, 2.0));
    const double t1 = rand.uniform(0.0, 1.5);
    const double t2 = rand.uniform(0.0, 1.5);
    BlochVector v;
    v.x = rand.uniform(-0.55, 0.55);
    v.y = rand.uniform(-0.55, 0.55);
    v.z = rand.uniform(-0.55, 0.55);
    const auto stepped = apply_bloch(params, t2, apply_bloch(params, t1, v));
    const auto direct = apply_bloch(params, t1 + t2, v);
    worst_semi = std::max({worst_semi, std::abs(stepped.x - direct.x),
                           std::abs(stepped.y - direct.y),
                           std::abs(stepped.z - direct.z)});

    const auto fixed = apply_bloch(params, t1, BlochVector(0, 0, params.mu()));
    CHECK(std::abs(fixed.z - params.mu()) <= 1e-12);
    CHECK(std::abs(fixed.x) <= 1e-12);

    const auto rho = rand.qubit_density();
    const double phi = rand.uniform(0.0, 2.0 * std::numbers::pi);
    Matrix u(2, 2);
    u << std::exp(Complex(0, -0.5 * phi)), 0, 0, std::exp(Complex(0, 0.5 * phi));
    const DensityOperator rotated(HermitianMatrix(u * rho.mat() * u.adjoint()), 1);
    const auto lhs = apply_qubit(params, t1, rotated);
    const Matrix rhs = u * apply_qubit(params, t1, rho).mat() * u.adjoint();
    worst_cov = std::max(worst_cov, (lhs.mat() - rhs).norm());
    worst_tr = std::max(worst_tr, std::abs(lhs.mat().trace().real() - 1.0));
  }
  CHECK(worst_semi <= 1e-12);
  CHECK(worst_cov <= 1e-10);
  CHECK(worst_tr <= 1e-13);
}

TEST_CASE("choi_psd_check") {
  SUBCASE("unitary channel is PSD for any mu") {
    for (double mu : {-1.0, 0.0, 0.5, 1.0}) {
      const auto r = choi_psd_check(ChannelParams(0, 0, mu, 0.7), 1.0);
      CHECK(r.psd);
      CHECK(r.min_eigenvalue >= -1e-12);
    }
  }
  SUBCASE("amplitude damping boundary gamma2 = gamma1/2, mu = 1 stays PSD") {
    const auto params = ChannelParams(1.0, 0.5, 1.0);
    for (double t : log_spaced_grid(1e-3, 5.0, 30)) {
      const auto r = choi_psd_check(params, t);
      CHECK(r.psd);
    }
  }
  SUBCASE("gamma2 < gamma1/2 fails positivity at some time") {
    const auto bad = ChannelParams::unchecked(1.0, 0.3, 0.0);
    double min_eig = 1.0;
    for (double t : log_spaced_grid(1e-3, 5.0, 60)) {
      min_eig = std::min(min_eig, choi_psd_check(bad, t).min_eigenvalue);
    }
    CHECK(min_eig < -1e-6);
  }
}
