#include "qmet/linalg.hpp"

#include <string>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/KroneckerProduct>

namespace qmet {

HermitianMatrix::HermitianMatrix(Matrix raw, double tol) {
  if (raw.rows() != raw.cols() || raw.rows() == 0) {
    throw ValidationError("HermitianMatrix: matrix must be square and nonempty");
  }
  const double asym = (raw - raw.adjoint()).norm();
  if (!(asym <= tol * std::max(1.0, raw.norm()))) {
    throw ValidationError("HermitianMatrix: anti-Hermitian part " +
                          std::to_string(asym) + " exceeds tolerance");
  }
  mat_ = 0.5 * (raw + raw.adjoint().eval());
}

HermitianMatrix HermitianMatrix::zero(Eigen::Index dim) {
  return HermitianMatrix(Matrix::Zero(dim, dim));
}

HermitianMatrix HermitianMatrix::identity(Eigen::Index dim) {
  return HermitianMatrix(Matrix::Identity(dim, dim));
}

Matrix SpectralDecomposition::reconstruct() const {
  return eigenvectors * eigenvalues.asDiagonal().toDenseMatrix().cast<Complex>() *
         eigenvectors.adjoint();
}

SpectralDecomposition eig_hermitian(const HermitianMatrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m.mat());
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("eig_hermitian: eigensolver failed to converge");
  }
  // Eigen sorts ascending; the spec orders eigenvalues descending.
  SpectralDecomposition out;
  out.eigenvalues = solver.eigenvalues().reverse();
  out.eigenvectors = solver.eigenvectors().rowwise().reverse();
  return out;
}

DensityOperator::DensityOperator(HermitianMatrix m, int n_qubits)
    : mat_(std::move(m)), n_qubits_(n_qubits) {
  if (n_qubits_ < 1) {
    throw ValidationError("DensityOperator: n_qubits must be positive");
  }
  if (mat_.dim() != (Eigen::Index{1} << n_qubits_)) {
    throw ValidationError("DensityOperator: dimension is not 2^n_qubits");
  }
  const double tr = mat_.mat().trace().real();
  if (std::abs(tr - 1.0) > 1e-10) {
    throw ValidationError("DensityOperator: trace " + std::to_string(tr) +
                          " differs from 1 beyond 1e-10");
  }
  const auto spec = eig_hermitian(mat_);
  const double min_eig = spec.eigenvalues.minCoeff();
  if (min_eig < -1e-10) {
    throw ValidationError("DensityOperator: negative eigenvalue " +
                          std::to_string(min_eig));
  }
}

Matrix kron(const Matrix& a, const Matrix& b) {
  return Eigen::kroneckerProduct(a, b).eval();
}

}  // namespace qmet
