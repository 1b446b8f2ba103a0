#pragma once

#include <string>

#include "qmet/channel.hpp"
#include "qmet/linalg.hpp"

namespace qmet {

enum class ProbeFamily { product, cat };

std::string to_string(ProbeFamily family);
ProbeFamily probe_family_from_string(std::string_view s);

/// One probe: n qubits prepared together, coupled at rate g for time T.
struct ProbeSpec {
  ProbeFamily family = ProbeFamily::product;
  int n = 1;
  double T = 1.0;  // interaction time, s
  double g = 0.0;  // coupling rate, s^-1

  ProbeSpec() = default;
  ProbeSpec(ProbeFamily family, int n, double T, double g);
};

/// Closed-form spectral data of the evolved single probe qubit:
/// eigenvalues (1 +- sqrt(d1^2 + d2^2))/2 with
/// d1 = mu (1 - e^{-gamma1 T}), d2 = e^{-gamma2 T}.
struct QubitSpectralData {
  double d1 = 0;
  double d2 = 1;
  double p_plus = 1;
  double p_minus = 0;
  double sin_theta = 1;
  double cos_theta = 0;
};

/// Closed-form spectral data of the evolved cat state on the subspace
/// spanned by |0...0> and |1...1>; the state is diagonal outside it.
struct CatSpectralData {
  double d_plus = 1;
  double d_minus = 1;
  double p_plus = 1;
  double p_minus = 0;
  double sin_theta = 1;
  double cos_theta = 0;
  double d2n = 1;  // e^{-n gamma2 T}
};

struct CatMoments {
  double mean_h = 0;
  double mean_h2 = 0;
  double var_h = 0;
};

/// Initial probe state: product (1+sigma_x)/2 per qubit, or the cat
/// projector onto (|0...0> + |1...1>)/sqrt(2). n <= kMaxBruteQubits.
DensityOperator build_initial(const ProbeSpec& spec);

/// Evolved probe state at t = T, assembled from the closed forms in the
/// Pauli basis. The signal rotation angle is spec.g * T; params.omega is
/// ignored here (the g-rotation is folded into the channel by convention).
/// n <= kMaxBruteQubits.
DensityOperator evolve(const ProbeSpec& spec, const ChannelParams& params);

QubitSpectralData qubit_spectral(double T, const ChannelParams& params);
CatSpectralData cat_spectral(int n, double T, const ChannelParams& params);

/// <h>, <h^2>, (Delta h)^2 of the evolved cat state, any n:
///   <h>  = n d1 / 2
///   <h^2> = (n/4)(1 + (n-1)(e^{-2 gamma1 T} + d1^2))
///   var  = (n/4)(1 + (n-1) e^{-2 gamma1 T} - d1^2)
CatMoments cat_moments(int n, double T, const ChannelParams& params);

/// Closed-form Delta^2 of the evolved state, any n.
/// Product: (n/4) e^{-2 gamma2 T}. Cat: (p+ - p-)^2 |h+-|^2 / (p+ + p-)
/// = (n^2/4) d2^{2n} * 2/(d+ + d-), which reduces to (n^2/4) e^{-2n gamma2 T}
/// when gamma1 = 0.
double delta_sq_closed(const ProbeSpec& spec, const ChannelParams& params);

}  // namespace qmet
