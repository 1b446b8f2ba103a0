#include "qmet/fisher.hpp"

namespace qmet {

namespace {

void check_same_dim(const DensityOperator& rho, const HermitianMatrix& other,
                    const char* who) {
  if (rho.dim() != other.dim()) {
    throw ValidationError(std::string(who) + ": dimension mismatch");
  }
}

}  // namespace

HermitianMatrix commutator_deriv(const DensityOperator& rho,
                                 const HermitianMatrix& h, double T) {
  check_same_dim(rho, h, "commutator_deriv");
  const Complex minus_i_T(0.0, -T);
  Matrix comm = h.mat() * rho.mat() - rho.mat() * h.mat();
  return HermitianMatrix(minus_i_T * comm);
}

HermitianMatrix sld(const DensityOperator& rho, const HermitianMatrix& drho) {
  check_same_dim(rho, drho, "sld");
  const double tr = drho.mat().trace().real();
  if (std::abs(tr) > 1e-10) {
    throw ValidationError("sld: drho must be traceless, got trace " +
                          std::to_string(tr));
  }
  const auto spec = eig_hermitian(rho.hermitian());
  const Matrix d_eig = spec.eigenvectors.adjoint() * drho.mat() * spec.eigenvectors;
  const Eigen::Index dim = rho.dim();
  Matrix l_eig = Matrix::Zero(dim, dim);
  for (Eigen::Index a = 0; a < dim; ++a) {
    for (Eigen::Index b = 0; b < dim; ++b) {
      const double psum = spec.eigenvalues(a) + spec.eigenvalues(b);
      if (psum < kNullSpaceCutoff) continue;
      l_eig(a, b) = 2.0 * d_eig(a, b) / psum;
    }
  }
  return HermitianMatrix(spec.eigenvectors * l_eig * spec.eigenvectors.adjoint());
}

double qfi(const DensityOperator& rho, const HermitianMatrix& drho) {
  check_same_dim(rho, drho, "qfi");
  const auto spec = eig_hermitian(rho.hermitian());
  const Matrix d_eig = spec.eigenvectors.adjoint() * drho.mat() * spec.eigenvectors;
  const Eigen::Index dim = rho.dim();
  double total = 0.0;
  for (Eigen::Index a = 0; a < dim; ++a) {
    for (Eigen::Index b = 0; b < dim; ++b) {
      const double psum = spec.eigenvalues(a) + spec.eigenvalues(b);
      if (psum < kNullSpaceCutoff) continue;
      total += 2.0 * std::norm(d_eig(a, b)) / psum;
    }
  }
  return total;
}

double delta_sq(const DensityOperator& rho, const HermitianMatrix& h) {
  check_same_dim(rho, h, "delta_sq");
  const auto spec = eig_hermitian(rho.hermitian());
  const Matrix h_eig = spec.eigenvectors.adjoint() * h.mat() * spec.eigenvectors;
  const Eigen::Index dim = rho.dim();
  double total = 0.0;
  for (Eigen::Index a = 0; a < dim; ++a) {
    for (Eigen::Index b = 0; b < dim; ++b) {
      const double psum = spec.eigenvalues(a) + spec.eigenvalues(b);
      if (psum < kNullSpaceCutoff) continue;
      const double pdiff = spec.eigenvalues(a) - spec.eigenvalues(b);
      total += 0.5 * pdiff * pdiff / psum * std::norm(h_eig(a, b));
    }
  }
  return total;
}

double expectation(const DensityOperator& rho, const HermitianMatrix& h) {
  check_same_dim(rho, h, "expectation");
  return (rho.mat() * h.mat()).trace().real();
}

double variance(const DensityOperator& rho, const HermitianMatrix& h) {
  check_same_dim(rho, h, "variance");
  const Matrix h2 = h.mat() * h.mat();
  const double mean = (rho.mat() * h.mat()).trace().real();
  const double mean2 = (rho.mat() * h2).trace().real();
  return mean2 - mean * mean;
}

}  // namespace qmet
