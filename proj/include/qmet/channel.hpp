#pragma once

#include "qmet/linalg.hpp"

namespace qmet {

/// Constants of the rotationally invariant single-qubit decoherence model:
///   A_t(1)            = 1 + mu (1 - e^{-gamma1 t}) sigma_z
///   A_t(sigma_z)      = e^{-gamma1 t} sigma_z
///   A_t(sigma_x +- i sigma_y) = e^{-gamma2 t} e^{-+ i omega t} (sigma_x +- i sigma_y)
///
/// gamma1 = 1/T1 (longitudinal), gamma2 = 1/T2 (transverse), mu the Bloch-z
/// coordinate of the fixed point, omega a coherent rotation rate. omega
/// defaults to 0 in bound computations and is set to the coupling g when the
/// channel itself carries the signal rotation; keeping it explicit avoids
/// double-rotating.
class ChannelParams {
 public:
  ChannelParams(double gamma1, double gamma2, double mu, double omega = 0.0);

  /// Builds without the complete-positivity checks (|mu| <= 1,
  /// gamma2 >= gamma1/2 >= 0). For diagnostics such as choi_psd_check only.
  static ChannelParams unchecked(double gamma1, double gamma2, double mu,
                                 double omega = 0.0);

  double gamma1() const noexcept { return gamma1_; }
  double gamma2() const noexcept { return gamma2_; }
  double mu() const noexcept { return mu_; }
  double omega() const noexcept { return omega_; }

  ChannelParams with_omega(double omega) const;

 private:
  ChannelParams() = default;
  double gamma1_ = 0, gamma2_ = 0, mu_ = 0, omega_ = 0;
};

struct BlochVector {
  double x = 0, y = 0, z = 0;

  BlochVector() = default;
  /// Validates |v| <= 1 + 1e-10.
  BlochVector(double x, double y, double z);

  double norm() const noexcept;
};

/// Affine Bloch-sphere action of A_t:
///   z' = e^{-gamma1 t} z + mu (1 - e^{-gamma1 t})
///   x' + i y' = e^{-gamma2 t} e^{+i omega t} (x + i y)
BlochVector apply_bloch(const ChannelParams& params, double t,
                        const BlochVector& v);

/// A_t on a single-qubit density operator; trace preserved exactly.
DensityOperator apply_qubit(const ChannelParams& params, double t,
                            const DensityOperator& rho);

/// A_t^{x n}: the per-qubit map applied to every qubit of an n-qubit state
/// (n <= kMaxBruteQubits). Exploits the channel factorization, cost O(n 4^n).
DensityOperator apply_nqubit(const ChannelParams& params, double t,
                             const DensityOperator& rho);

struct ChoiReport {
  bool psd = false;
  double min_eigenvalue = 0;
};

/// Builds the 4x4 Choi matrix of the single-qubit map at time t and reports
/// its minimum eigenvalue (advisory complete-positivity diagnostic).
ChoiReport choi_psd_check(const ChannelParams& params, double t);

}  // namespace qmet
