#include "qmet/pauli.hpp"

#include <bit>

namespace qmet {

namespace {

Matrix make_sigma(char label) {
  Matrix m(2, 2);
  switch (label) {
    case 'I':
      m << 1, 0, 0, 1;
      break;
    case 'X':
      m << 0, 1, 1, 0;
      break;
    case 'Y':
      m << 0, Complex(0, -1), Complex(0, 1), 0;
      break;
    case 'Z':
      m << 1, 0, 0, -1;
      break;
    default:
      throw ValidationError(std::string("pauli: unknown label '") + label +
                            "', expected one of I X Y Z");
  }
  return m;
}

}  // namespace

const Matrix& sigma_x() {
  static const Matrix m = make_sigma('X');
  return m;
}

const Matrix& sigma_y() {
  static const Matrix m = make_sigma('Y');
  return m;
}

const Matrix& sigma_z() {
  static const Matrix m = make_sigma('Z');
  return m;
}

const Matrix& identity2() {
  static const Matrix m = make_sigma('I');
  return m;
}

HermitianMatrix pauli_string(std::string_view labels) {
  if (labels.empty()) {
    throw ValidationError("pauli_string: empty label sequence");
  }
  if (std::cmp_greater(labels.size(), kMaxBruteQubits)) {
    throw ValidationError("pauli_string: more than " +
                          std::to_string(kMaxBruteQubits) + " qubits");
  }
  Matrix out = make_sigma(labels.front());
  for (std::size_t j = 1; j < labels.size(); ++j) {
    out = kron(out, make_sigma(labels[j]));
  }
  return HermitianMatrix(std::move(out));
}

HermitianMatrix collective_h(int n) {
  if (n < 1 || n > kMaxBruteQubits) {
    throw ValidationError("collective_h: n out of range");
  }
  const Eigen::Index dim = Eigen::Index{1} << n;
  Matrix out = Matrix::Zero(dim, dim);
  for (Eigen::Index b = 0; b < dim; ++b) {
    const int ones = std::popcount(static_cast<unsigned>(b));
    out(b, b) = 0.5 * (n - 2 * ones);
  }
  return HermitianMatrix(std::move(out));
}

HermitianMatrix collective_sigma_x(int n) {
  return pauli_string(std::string(static_cast<std::size_t>(n), 'X'));
}

}  // namespace qmet
