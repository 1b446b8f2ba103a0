#pragma once

#include <complex>
#include <stdexcept>

#include <Eigen/Dense>

namespace qmet {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;

/// Largest qubit count for which explicit 2^n x 2^n matrices are built.
inline constexpr int kMaxBruteQubits = 6;

/// Eigenvalue-pair cutoff for the restricted sums in the SLD / Fisher
/// machinery: pairs with p_a + p_b below this are treated as null space.
inline constexpr double kNullSpaceCutoff = 1e-12;

class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Dense complex Hermitian matrix. Construction symmetrizes (M + M^dag)/2
/// and rejects inputs whose anti-Hermitian part exceeds `tol`.
class HermitianMatrix {
 public:
  explicit HermitianMatrix(Matrix raw, double tol = 1e-9);

  static HermitianMatrix zero(Eigen::Index dim);
  static HermitianMatrix identity(Eigen::Index dim);

  const Matrix& mat() const noexcept { return mat_; }
  Eigen::Index dim() const noexcept { return mat_.rows(); }

 private:
  Matrix mat_;
};

/// Eigen-decomposition with eigenvalues sorted in descending order and
/// orthonormal eigenvector columns.
struct SpectralDecomposition {
  RealVector eigenvalues;
  Matrix eigenvectors;

  Matrix reconstruct() const;
};

SpectralDecomposition eig_hermitian(const HermitianMatrix& m);

/// Trace-one positive semidefinite Hermitian matrix on (C^2)^{x n}.
class DensityOperator {
 public:
  DensityOperator(HermitianMatrix m, int n_qubits);

  const HermitianMatrix& hermitian() const noexcept { return mat_; }
  const Matrix& mat() const noexcept { return mat_.mat(); }
  int n_qubits() const noexcept { return n_qubits_; }
  Eigen::Index dim() const noexcept { return mat_.dim(); }

 private:
  HermitianMatrix mat_;
  int n_qubits_;
};

Matrix kron(const Matrix& a, const Matrix& b);

}  // namespace qmet
