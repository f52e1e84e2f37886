#pragma once

// Dense complex linear algebra used by every other module.
//
// Qubit ordering: in a composite index the first factor of a tensor product
// occupies the most significant bits, so kron({A, B}) has A acting on the
// high bit. Qubit j = 1 of a register is always the first factor.

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace pme::linalg {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using StateVector = Eigen::VectorXcd;
using Mat2 = Eigen::Matrix2cd;
using Vec2 = Eigen::Vector2cd;

inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kUnitaryTol = 1e-12;
inline constexpr int kMaxDenseDim = 1 << 12;

Mat2 identity2();
Mat2 pauli_x();
Mat2 pauli_y();
Mat2 pauli_z();

double max_abs(const ComplexMatrix& m);
bool is_hermitian(const ComplexMatrix& m, double tol = kHermitianTol);
bool is_unitary(const ComplexMatrix& m, double tol = kUnitaryTol);

/// e^{-i h tau} for a 2x2 Hermitian h via the Pauli decomposition
/// h = c0 + (dz sz + dx sx + dy sy)/2. Throws ValidationError if h is not
/// Hermitian.
Mat2 expm2_hermitian(const Mat2& h, double tau);

/// e^{-i h tau} by spectral decomposition. Throws ValidationError if h is not
/// Hermitian and ResourceError above kMaxDenseDim.
ComplexMatrix expm_hermitian(const ComplexMatrix& h, double tau);

/// Tensor product of square matrices, first factor most significant.
ComplexMatrix kron(std::span<const ComplexMatrix> factors);
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// Tensor product of vectors, same ordering as kron.
StateVector kron_vectors(std::span<const StateVector> factors);

/// Embed a single-qubit operator on qubit `index` (0 = most significant) of
/// an n-qubit register.
ComplexMatrix embed(const Mat2& op, int index, int num_qubits);

}  // namespace pme::linalg
