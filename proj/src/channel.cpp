#include "qmet/channel.hpp"

#include <cmath>

#include "qmet/pauli.hpp"

namespace qmet {

ChannelParams::ChannelParams(double gamma1, double gamma2, double mu,
                             double omega)
    : gamma1_(gamma1), gamma2_(gamma2), mu_(mu), omega_(omega) {
  if (!(gamma1 >= 0.0)) {
    throw ValidationError("ChannelParams: gamma1 must be >= 0");
  }
  if (!(gamma2 >= 0.5 * gamma1)) {
    throw ValidationError(
        "ChannelParams: complete positivity requires gamma2 >= gamma1/2");
  }
  if (!(mu >= -1.0 && mu <= 1.0)) {
    throw ValidationError("ChannelParams: mu must lie in [-1, 1]");
  }
}

ChannelParams ChannelParams::unchecked(double gamma1, double gamma2, double mu,
                                       double omega) {
  ChannelParams p;
  p.gamma1_ = gamma1;
  p.gamma2_ = gamma2;
  p.mu_ = mu;
  p.omega_ = omega;
  return p;
}

ChannelParams ChannelParams::with_omega(double omega) const {
  ChannelParams p = *this;
  p.omega_ = omega;
  return p;
}

BlochVector::BlochVector(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {
  if (norm() > 1.0 + 1e-10) {
    throw ValidationError("BlochVector: norm exceeds 1");
  }
}

double BlochVector::norm() const noexcept {
  return std::sqrt(x * x + y * y + z * z);
}

BlochVector apply_bloch(const ChannelParams& params, double t,
                        const BlochVector& v) {
  if (!(t >= 0.0)) {
    throw ValidationError("apply_bloch: t must be >= 0");
  }
  const double e1 = std::exp(-params.gamma1() * t);
  const double e2 = std::exp(-params.gamma2() * t);
  const double wt = params.omega() * t;
  const double c = std::cos(wt);
  const double s = std::sin(wt);
  BlochVector out;
  out.x = e2 * (v.x * c - v.y * s);
  out.y = e2 * (v.x * s + v.y * c);
  out.z = e1 * v.z + params.mu() * (1.0 - e1);
  return out;
}

namespace {

/// In-place per-qubit application on the matrix-unit sub-blocks of the given
/// qubit. E01/E10 pick up the transverse factor, the (E00, E11) pair mixes
/// through the longitudinal decay toward the fixed point; the sum
/// rho00 + rho11 is untouched, so the trace is preserved exactly.
void apply_on_qubit(Matrix& m, int n, int qubit, const ChannelParams& params,
                    double t) {
  const double e1 = std::exp(-params.gamma1() * t);
  const double f = params.mu() * (1.0 - e1);
  const Complex e2 =
      std::exp(-params.gamma2() * t) *
      std::exp(Complex(0.0, -params.omega() * t));
  const Eigen::Index dim = m.rows();
  const Eigen::Index mask = Eigen::Index{1} << (n - 1 - qubit);
  for (Eigen::Index r = 0; r < dim; ++r) {
    if (r & mask) continue;
    for (Eigen::Index c = 0; c < dim; ++c) {
      if (c & mask) continue;
      const Eigen::Index r1 = r | mask;
      const Eigen::Index c1 = c | mask;
      const Complex a00 = m(r, c);
      const Complex a11 = m(r1, c1);
      const Complex sum = a00 + a11;
      const Complex zp = e1 * (a00 - a11) + f * sum;
      m(r, c) = 0.5 * (sum + zp);
      m(r1, c1) = 0.5 * (sum - zp);
      m(r, c1) *= e2;
      m(r1, c) *= std::conj(e2);
    }
  }
}

}  // namespace

DensityOperator apply_qubit(const ChannelParams& params, double t,
                            const DensityOperator& rho) {
  if (rho.dim() != 2) {
    throw ValidationError("apply_qubit: expected a single-qubit state");
  }
  return apply_nqubit(params, t, rho);
}

DensityOperator apply_nqubit(const ChannelParams& params, double t,
                             const DensityOperator& rho) {
  if (!(t >= 0.0)) {
    throw ValidationError("apply_nqubit: t must be >= 0");
  }
  const int n = rho.n_qubits();
  if (n > kMaxBruteQubits) {
    throw ValidationError("apply_nqubit: n exceeds the brute-force cap");
  }
  Matrix m = rho.mat();
  for (int j = 0; j < n; ++j) {
    apply_on_qubit(m, n, j, params, t);
  }
  return DensityOperator(HermitianMatrix(std::move(m)), n);
}

ChoiReport choi_psd_check(const ChannelParams& params, double t) {
  if (!(t >= 0.0)) {
    throw ValidationError("choi_psd_check: t must be >= 0");
  }
  // C = sum_{ij} E_ij (x) A_t(E_ij), assembled from the map's action on the
  // four matrix units of one qubit.
  Matrix choi = Matrix::Zero(4, 4);
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      Matrix unit = Matrix::Zero(2, 2);
      unit(i, j) = 1.0;
      Matrix image = unit;
      // Reuse the n-qubit sweep on the raw 2x2 block (not a density matrix).
      const double e1 = std::exp(-params.gamma1() * t);
      const double f = params.mu() * (1.0 - e1);
      const Complex e2 = std::exp(-params.gamma2() * t) *
                         std::exp(Complex(0.0, -params.omega() * t));
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
  ChoiReport report;
  report.min_eigenvalue = solver.eigenvalues().minCoeff();
  report.psd = report.min_eigenvalue >= -1e-10;
  return report;
}

}  // namespace qmet
