#include "pme/linalg.hpp"

#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "pme/error.hpp"

namespace pme::linalg {

namespace {

double scaled_tol(const ComplexMatrix& m, double tol) { return tol * std::max(1.0, max_abs(m)); }

}  // namespace

Mat2 identity2() { return Mat2::Identity(); }

Mat2 pauli_x() {
  Mat2 m;
  m << 0.0, 1.0, 1.0, 0.0;
  return m;
}

Mat2 pauli_y() {
  Mat2 m;
  m << 0.0, Complex(0.0, -1.0), Complex(0.0, 1.0), 0.0;
  return m;
}

Mat2 pauli_z() {
  Mat2 m;
  m << 1.0, 0.0, 0.0, -1.0;
  return m;
}

double max_abs(const ComplexMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

bool is_hermitian(const ComplexMatrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return max_abs(m - m.adjoint()) <= scaled_tol(m, tol);
}

bool is_unitary(const ComplexMatrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  const ComplexMatrix residual = m.adjoint() * m - ComplexMatrix::Identity(m.rows(), m.cols());
  return max_abs(residual) <= tol;
}

Mat2 expm2_hermitian(const Mat2& h, double tau) {
  if (!is_hermitian(h)) throw ValidationError("expm2_hermitian: matrix is not Hermitian");
  const double c0 = 0.5 * (h(0, 0).real() + h(1, 1).real());
  const double dz = h(0, 0).real() - h(1, 1).real();
  const double dx = 2.0 * h(0, 1).real();
  const double dy = -2.0 * h(0, 1).imag();
  const double omega = std::sqrt(dz * dz + dx * dx + dy * dy);
  const double theta = 0.5 * omega * tau;
  // sin(theta) / (omega / 2) written so omega = 0 needs no special case.
  const double ratio = theta == 0.0 ? tau : std::sin(theta) / theta * tau;

  Mat2 traceless = h;
  traceless(0, 0) -= c0;
  traceless(1, 1) -= c0;
  const Mat2 rotation = std::cos(theta) * Mat2::Identity() - Complex(0.0, ratio) * traceless;
  return std::polar(1.0, -c0 * tau) * rotation;
}

ComplexMatrix expm_hermitian(const ComplexMatrix& h, double tau) {
  if (h.rows() > kMaxDenseDim) {
    throw ResourceError("expm_hermitian: dimension " + std::to_string(h.rows()) + " exceeds guard " +
                        std::to_string(kMaxDenseDim));
  }
  if (!is_hermitian(h)) throw ValidationError("expm_hermitian: matrix is not Hermitian");
  // Symmetrize so the solver sees an exactly self-adjoint input.
  const ComplexMatrix sym = 0.5 * (h + h.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(sym);
  if (solver.info() != Eigen::Success) throw ValidationError("expm_hermitian: eigendecomposition failed");
  Eigen::VectorXcd phases(h.rows());
  for (Eigen::Index i = 0; i < h.rows(); ++i) phases(i) = std::polar(1.0, -solver.eigenvalues()(i) * tau);
  const auto& vecs = solver.eigenvectors();
  return vecs * phases.asDiagonal() * vecs.adjoint();
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

ComplexMatrix kron(std::span<const ComplexMatrix> factors) {
  if (factors.empty()) throw ValidationError("kron: empty factor list");
  ComplexMatrix out = factors.front();
  if (out.rows() != out.cols()) throw ValidationError("kron: factor is not square");
  for (const auto& f : factors.subspan(1)) {
    if (f.rows() != f.cols()) throw ValidationError("kron: factor is not square");
    out = kron(out, f);
  }
  return out;
}

StateVector kron_vectors(std::span<const StateVector> factors) {
  if (factors.empty()) throw ValidationError("kron_vectors: empty factor list");
  StateVector out = factors.front();
  for (const auto& f : factors.subspan(1)) {
    StateVector next(out.size() * f.size());
    for (Eigen::Index i = 0; i < out.size(); ++i) next.segment(i * f.size(), f.size()) = out(i) * f;
    out = std::move(next);
  }
  return out;
}

ComplexMatrix embed(const Mat2& op, int index, int num_qubits) {
  if (num_qubits < 1 || index < 0 || index >= num_qubits) {
    throw ValidationError("embed: qubit index out of range");
  }
  std::vector<ComplexMatrix> factors(static_cast<std::size_t>(num_qubits), ComplexMatrix(Mat2::Identity()));
  factors[static_cast<std::size_t>(index)] = op;
  return kron(factors);
}

}  // namespace pme::linalg
