#pragma once

#include <string_view>

#include "qmet/linalg.hpp"

namespace qmet {

const Matrix& sigma_x();
const Matrix& sigma_y();
const Matrix& sigma_z();
const Matrix& identity2();

/// Kronecker product of single-qubit Paulis, one label per qubit from
/// {I, X, Y, Z}. Qubit 1 is the leftmost factor (big-endian tensor order).
HermitianMatrix pauli_string(std::string_view labels);

/// Collective generator h = sum_j sigma_z;j / 2 on n qubits (diagonal,
/// eigenvalues (n - 2k)/2 for k set bits).
HermitianMatrix collective_h(int n);

/// Parity operator Sigma_x = X^{x n}.
HermitianMatrix collective_sigma_x(int n);

}  // namespace qmet
