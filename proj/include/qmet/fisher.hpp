#pragma once

#include "qmet/linalg.hpp"

namespace qmet {

/// rho' = -iT [h, rho], the analytic derivative of the state family
/// rho(g) = e^{-i h g T} rho e^{i h g T} at the operating point.
HermitianMatrix commutator_deriv(const DensityOperator& rho,
                                 const HermitianMatrix& h, double T);

/// Symmetric logarithmic derivative: L with drho = (rho L + L rho)/2 on the
/// support of rho. Requires tr(drho) = 0. Eigenvalue pairs below the
/// null-space cutoff are excluded.
HermitianMatrix sld(const DensityOperator& rho, const HermitianMatrix& drho);

/// Quantum Fisher information (ds/dg)^2 = tr(drho L_rho(drho)).
double qfi(const DensityOperator& rho, const HermitianMatrix& drho);

/// Delta^2 = (1/2) sum_{ab} (p_a - p_b)^2 / (p_a + p_b) |h_ab|^2 in the
/// eigenbasis of rho; satisfies qfi(rho, -iT[h,rho]) = 4 T^2 Delta^2.
double delta_sq(const DensityOperator& rho, const HermitianMatrix& h);

/// (Delta h)^2 = <h^2> - <h>^2 with respect to rho. Always >= delta_sq.
double variance(const DensityOperator& rho, const HermitianMatrix& h);

double expectation(const DensityOperator& rho, const HermitianMatrix& h);

}  // namespace qmet
