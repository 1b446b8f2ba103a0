#include "qmet/probes.hpp"

#include <cmath>

#include "qmet/pauli.hpp"

namespace qmet {

std::string to_string(ProbeFamily family) {
  return family == ProbeFamily::product ? "product" : "cat";
}

ProbeFamily probe_family_from_string(std::string_view s) {
  if (s == "product") return ProbeFamily::product;
  if (s == "cat") return ProbeFamily::cat;
  throw ValidationError("unknown probe family '" + std::string(s) +
                        "', expected product or cat");
}

ProbeSpec::ProbeSpec(ProbeFamily family_, int n_, double T_, double g_)
    : family(family_), n(n_), T(T_), g(g_) {
  if (n < 1) throw ValidationError("ProbeSpec: n must be >= 1");
  if (!(T >= 0.0)) throw ValidationError("ProbeSpec: T must be >= 0");
}

namespace {

void check_cap(const ProbeSpec& spec, const char* who) {
  if (spec.n > kMaxBruteQubits) {
    throw ValidationError(std::string(who) + ": n = " + std::to_string(spec.n) +
                          " exceeds the explicit-matrix cap of " +
                          std::to_string(kMaxBruteQubits));
  }
}

Matrix kron_power(const Matrix& factor, int n) {
  Matrix out = factor;
  for (int j = 1; j < n; ++j) out = kron(out, factor);
  return out;
}

}  // namespace

DensityOperator build_initial(const ProbeSpec& spec) {
  check_cap(spec, "build_initial");
  const Eigen::Index dim = Eigen::Index{1} << spec.n;
  if (spec.family == ProbeFamily::product) {
    // (1 + sigma_x)/2 per qubit: every entry of the n-fold product is 2^-n.
    Matrix m = Matrix::Constant(dim, dim, Complex(1.0 / static_cast<double>(dim), 0.0));
    return DensityOperator(HermitianMatrix(std::move(m)), spec.n);
  }
  Matrix m = Matrix::Zero(dim, dim);
  m(0, 0) = m(0, dim - 1) = m(dim - 1, 0) = m(dim - 1, dim - 1) = 0.5;
  return DensityOperator(HermitianMatrix(std::move(m)), spec.n);
}

DensityOperator evolve(const ProbeSpec& spec, const ChannelParams& params) {
  check_cap(spec, "evolve");
  const double e1 = std::exp(-params.gamma1() * spec.T);
  const double d1 = params.mu() * (1.0 - e1);
  const double d2 = std::exp(-params.gamma2() * spec.T);
  const double angle = spec.g * spec.T;

  if (spec.family == ProbeFamily::product) {
    Matrix qubit = 0.5 * (identity2() + d1 * sigma_z() +
                          d2 * (std::cos(angle) * sigma_x() +
                                std::sin(angle) * sigma_y()));
    return DensityOperator(HermitianMatrix(kron_power(qubit, spec.n)), spec.n);
  }

  const Matrix up = identity2() + (e1 + d1) * sigma_z();
  const Matrix down = identity2() - (e1 - d1) * sigma_z();
  const Matrix raise = sigma_x() + Complex(0, 1) * sigma_y();
  const Matrix lower = sigma_x() - Complex(0, 1) * sigma_y();
  const double d2n = std::exp(-spec.n * params.gamma2() * spec.T);
  const Complex phase = std::exp(Complex(0.0, -spec.n * angle));
  Matrix m = kron_power(up, spec.n) + kron_power(down, spec.n) +
             d2n * phase * kron_power(raise, spec.n) +
             d2n * std::conj(phase) * kron_power(lower, spec.n);
  m /= std::pow(2.0, spec.n + 1);
  return DensityOperator(HermitianMatrix(std::move(m)), spec.n);
}

QubitSpectralData qubit_spectral(double T, const ChannelParams& params) {
  if (!(T >= 0.0)) throw ValidationError("qubit_spectral: T must be >= 0");
  QubitSpectralData out;
  const double e1 = std::exp(-params.gamma1() * T);
  out.d1 = params.mu() * (1.0 - e1);
  out.d2 = std::exp(-params.gamma2() * T);
  const double r = std::hypot(out.d1, out.d2);
  out.p_plus = 0.5 * (1.0 + r);
  out.p_minus = 0.5 * (1.0 - r);
  out.sin_theta = out.d2 / r;
  out.cos_theta = out.d1 / r;
  return out;
}

CatSpectralData cat_spectral(int n, double T, const ChannelParams& params) {
  if (n < 1) throw ValidationError("cat_spectral: n must be >= 1");
  if (!(T >= 0.0)) throw ValidationError("cat_spectral: T must be >= 0");
  CatSpectralData out;
  const double e1 = std::exp(-params.gamma1() * T);
  const double d1 = params.mu() * (1.0 - e1);
  out.d_plus = std::pow(0.5 * (1.0 + e1 + d1), n) +
               std::pow(0.5 * (1.0 - e1 + d1), n);
  out.d_minus = std::pow(0.5 * (1.0 - e1 - d1), n) +
                std::pow(0.5 * (1.0 + e1 - d1), n);
  // d2^n as e^{-n gamma2 T} directly, never by repeated multiplication.
  out.d2n = std::exp(-static_cast<double>(n) * params.gamma2() * T);
  const double gap = out.d_plus - out.d_minus;
  const double disc = std::hypot(gap, 2.0 * out.d2n);
  out.p_plus = 0.25 * (out.d_plus + out.d_minus + disc);
  out.p_minus = 0.25 * (out.d_plus + out.d_minus - disc);
  out.sin_theta = 2.0 * out.d2n / disc;
  out.cos_theta = gap / disc;
  return out;
}

CatMoments cat_moments(int n, double T, const ChannelParams& params) {
  if (n < 1) throw ValidationError("cat_moments: n must be >= 1");
  CatMoments out;
  const double e1 = std::exp(-params.gamma1() * T);
  const double d1 = params.mu() * (1.0 - e1);
  const double e1sq = std::exp(-2.0 * params.gamma1() * T);
  out.mean_h = 0.5 * n * d1;
  out.mean_h2 = 0.25 * n * (1.0 + (n - 1) * (e1sq + d1 * d1));
  out.var_h = 0.25 * n * (1.0 + (n - 1) * e1sq - d1 * d1);
  return out;
}

double delta_sq_closed(const ProbeSpec& spec, const ChannelParams& params) {
  if (spec.family == ProbeFamily::product) {
    return 0.25 * spec.n * std::exp(-2.0 * params.gamma2() * spec.T);
  }
  const auto cs = cat_spectral(spec.n, spec.T, params);
  // (p+ - p-)^2 |h+-|^2 / (p+ + p-) on the two-dimensional coherent block,
  // simplified to n^2 d2^{2n} / (2 (d+ + d-)) so small d2^n never cancels;
  // equals (n^2/4) e^{-2 n gamma2 T} when gamma1 = 0.
  const double n = static_cast<double>(spec.n);
  return n * n * cs.d2n * cs.d2n / (2.0 * (cs.d_plus + cs.d_minus));
}

}  // namespace qmet
