#pragma once

// Test-only oracles: independent brute-force routes used to freeze expected
// values. None of these call the closed-form implementation paths they check.

#include <cmath>
#include <random>
#include <vector>

#include <Eigen/Eigenvalues>

#include "qmet/channel.hpp"
#include "qmet/linalg.hpp"
#include "qmet/pauli.hpp"

namespace qmet::testing {

struct Rand {
  std::mt19937_64 eng;
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> unit{0.0, 1.0};

  explicit Rand(std::uint64_t seed) : eng(seed) {}

  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(eng); }

  Matrix complex_gaussian(Eigen::Index dim) {
    Matrix m(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
      for (Eigen::Index j = 0; j < dim; ++j) {
        m(i, j) = Complex(gauss(eng), gauss(eng));
      }
    }
    return m;
  }

  HermitianMatrix hermitian(Eigen::Index dim) {
    Matrix a = complex_gaussian(dim);
    return HermitianMatrix(0.5 * (a + a.adjoint().eval()));
  }

  DensityOperator density(int n_qubits, double ridge = 0.05) {
    const Eigen::Index dim = Eigen::Index{1} << n_qubits;
    Matrix b = complex_gaussian(dim);
    Matrix rho = b * b.adjoint();
    rho += ridge * rho.trace().real() / static_cast<double>(dim) *
           Matrix::Identity(dim, dim);
    rho /= rho.trace().real();
    return DensityOperator(HermitianMatrix(std::move(rho)), n_qubits);
  }

  DensityOperator qubit_density(double max_radius = 0.95) {
    const double r = max_radius * std::cbrt(unit(eng));
    const double ct = uniform(-1.0, 1.0);
    const double st = std::sqrt(1.0 - ct * ct);
    const double phi = uniform(0.0, 2.0 * 3.14159265358979323846);
    Matrix rho = 0.5 * (identity2() + r * st * std::cos(phi) * sigma_x() +
                        r * st * std::sin(phi) * sigma_y() + r * ct * sigma_z());
    return DensityOperator(HermitianMatrix(std::move(rho)), 1);
  }

  ChannelParams cp_params(double gamma_scale = 1.0) {
    const double g2 = uniform(0.0, 1.5) * gamma_scale;
    const double g1 = uniform(0.0, 2.0 * g2);
    return ChannelParams(g1, g2, uniform(-1.0, 1.0));
  }
};

/// exp(i s H) via the spectral theorem, H Hermitian.
inline Matrix exp_i_scaled(const HermitianMatrix& h, double s) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(h.mat());
  const auto& w = solver.eigenvalues();
  const auto& v = solver.eigenvectors();
  Matrix phases = Matrix::Zero(h.dim(), h.dim());
  for (Eigen::Index k = 0; k < h.dim(); ++k) {
    phases(k, k) = std::exp(Complex(0.0, s * w(k)));
  }
  return v * phases * v.adjoint();
}

/// Central finite-difference oracle for rho' = d/dg e^{-i h g T} rho e^{i h g T}
/// at g = 0 (test-only alternative to the analytic commutator).
inline HermitianMatrix finite_difference_drho(const DensityOperator& rho,
                                              const HermitianMatrix& h,
                                              double T, double step = 1e-6) {
  const Matrix up = exp_i_scaled(h, -step * T);
  const Matrix down = exp_i_scaled(h, step * T);
  const Matrix plus = up * rho.mat() * up.adjoint();
  const Matrix minus = down * rho.mat() * down.adjoint();
  return HermitianMatrix((plus - minus) / (2.0 * step), 1e-6);
}

/// Kraus operators of the single-qubit map from the eigen-decomposition of
/// its Choi matrix: an application route independent of apply_nqubit.
inline std::vector<Matrix> kraus_from_choi(const ChannelParams& params,
                                           double t) {
  const double e1 = std::exp(-params.gamma1() * t);
  const double f = params.mu() * (1.0 - e1);
  const Complex e2 = std::exp(-params.gamma2() * t) *
                     std::exp(Complex(0.0, -params.omega() * t));
  Matrix choi = Matrix::Zero(4, 4);
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      Matrix unit = Matrix::Zero(2, 2);
      unit(i, j) = 1.0;
      Matrix image = Matrix::Zero(2, 2);
      const Complex sum = unit(0, 0) + unit(1, 1);
      const Complex zp = e1 * (unit(0, 0) - unit(1, 1)) + f * sum;
      image(0, 0) = 0.5 * (sum + zp);
      image(1, 1) = 0.5 * (sum - zp);
      image(0, 1) = e2 * unit(0, 1);
      image(1, 0) = std::conj(e2) * unit(1, 0);
      choi.block(2 * i, 2 * j, 2, 2) = image;
    }
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(choi);
  std::vector<Matrix> kraus;
  for (Eigen::Index k = 0; k < 4; ++k) {
    const double lam = solver.eigenvalues()(k);
    if (lam < 1e-14) continue;
    Matrix op(2, 2);
    // Choi column index packs (input i, output a) as 2i + a.
    for (int i = 0; i < 2; ++i) {
      for (int a = 0; a < 2; ++a) {
        op(a, i) = std::sqrt(lam) * solver.eigenvectors()(2 * i + a, k);
      }
    }
    kraus.push_back(std::move(op));
  }
  return kraus;
}

/// Applies the single-qubit Kraus set to qubit `target` of an n-qubit state.
inline Matrix apply_kraus_on_qubit(const Matrix& rho, int n, int target,
                                   const std::vector<Matrix>& kraus) {
  const Eigen::Index dim = rho.rows();
  Matrix out = Matrix::Zero(dim, dim);
  for (const auto& k : kraus) {
    Matrix lifted = Matrix::Identity(1, 1);
    for (int j = 0; j < n; ++j) {
      lifted = kron(lifted, j == target ? k : identity2());
    }
    out += lifted * rho * lifted.adjoint();
  }
  return out;
}

/// Full n-qubit channel application through the Kraus route.
inline DensityOperator apply_channel_kraus(const ChannelParams& params,
                                           double t,
                                           const DensityOperator& rho) {
  const auto kraus = kraus_from_choi(params, t);
  Matrix m = rho.mat();
  for (int j = 0; j < rho.n_qubits(); ++j) {
    m = apply_kraus_on_qubit(m, rho.n_qubits(), j, kraus);
  }
  return DensityOperator(HermitianMatrix(std::move(m), 1e-8), rho.n_qubits());
}

}  // namespace qmet::testing
