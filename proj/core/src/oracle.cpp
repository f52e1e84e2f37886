#include "pme/oracle.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "pme/error.hpp"
#include "pme/trajectory.hpp"

namespace pme::oracle {

using linalg::Complex;
using linalg::Mat2;

namespace {

void enumerate(const std::vector<ComplexMatrix>& rounds, const StateVector& target, trajectory::FeedbackHistory& history,
               OracleResult& out) {
  const std::size_t k = history.bits.size();
  if (k == rounds.size()) {
    const auto m = static_cast<std::size_t>(trajectory::outcome_from_history(history));
    out.distribution.probs[m] = target.squaredNorm();
    out.target_states[m] = target;
    return;
  }
  const Eigen::Index dim = target.size();
  const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
  StateVector full(2 * dim);
  full.head(dim) = inv_sqrt2 * target;
  full.tail(dim) = inv_sqrt2 * target;
  full = rounds[k] * full;

  // Feedback rotation diag(1, phi') then Hadamard on the probe.
  const Complex phase = trajectory::feedback_phase(history);
  const StateVector zero_part = full.head(dim);
  const StateVector one_part = phase * full.tail(dim);
  for (int r = 0; r < 2; ++r) {
    const StateVector projected = inv_sqrt2 * (zero_part + (r == 0 ? 1.0 : -1.0) * one_part);
    history.bits.push_back(r);
    enumerate(rounds, projected, history, out);
    history.bits.pop_back();
  }
}

}  // namespace

FullSystemHamiltonian build_hamiltonian(HamiltonianTag tag, const model::DetuningSample& sample,
                                        const model::ProtocolParams& params) {
  model::check_sample(sample, params);
  const int n = params.num_qubits();
  if (n + 1 > kMaxHamiltonianQubits) {
    throw ResourceError("build_hamiltonian: N + 1 = " + std::to_string(n + 1) + " exceeds guard " +
                        std::to_string(kMaxHamiltonianQubits));
  }
  const int total = n + 1;
  const Eigen::Index dim = Eigen::Index{1} << total;
  ComplexMatrix h = ComplexMatrix::Zero(dim, dim);

  const double coupling = tag == HamiltonianTag::kZero ? 0.0 : params.g();
  const double drive = tag == HamiltonianTag::kPlus    ? params.lambda()
                       : tag == HamiltonianTag::kMinus ? -params.lambda()
                                                       : 0.0;
  const double c = params.convention() == model::ProbeConvention::kShiftOnZero ? 1.0 : -1.0;
  const ComplexMatrix probe_factor = ComplexMatrix(Mat2::Identity() + c * linalg::pauli_z());
  const ComplexMatrix probe = linalg::kron(probe_factor, ComplexMatrix::Identity(dim / 2, dim / 2));

  for (int j = 1; j <= n; ++j) {
    const ComplexMatrix zj = linalg::embed(linalg::pauli_z(), j, total);
    const ComplexMatrix xj = linalg::embed(linalg::pauli_x(), j, total);
    h += 0.5 * coupling * probe * zj;
    h += 0.5 * sample.deltas[static_cast<std::size_t>(j - 1)] * zj;
    h += 0.5 * drive * xj;
  }
  return {tag, h};
}

ComplexMatrix probe_block(const ComplexMatrix& full, int probe_bit) {
  if (probe_bit != 0 && probe_bit != 1) throw ValidationError("probe_block: bit must be 0 or 1");
  const Eigen::Index half = full.rows() / 2;
  return full.block(probe_bit * half, probe_bit * half, half, half);
}

OracleResult simulate_full_circuit(const model::DetuningSample& sample, const model::ProtocolParams& params,
                                   std::span<const int> bits) {
  model::check_sample(sample, params, bits);
  if (params.gates() != model::GateModel::kApproximate) {
    throw ValidationError("simulate_full_circuit: the oracle only simulates the physical Hamiltonians");
  }
  if (params.num_qubits() > kMaxCircuitQubits || params.rounds() > kMaxCircuitRounds) {
    throw ResourceError("simulate_full_circuit: requires N <= " + std::to_string(kMaxCircuitQubits) +
                        " and L <= " + std::to_string(kMaxCircuitRounds));
  }
  const double pulse = params.cnot_time();
  const ComplexMatrix u_plus =
      linalg::expm_hermitian(build_hamiltonian(HamiltonianTag::kPlus, sample, params).matrix, pulse);
  const ComplexMatrix u_minus =
      linalg::expm_hermitian(build_hamiltonian(HamiltonianTag::kMinus, sample, params).matrix, pulse);
  const ComplexMatrix h_zero = build_hamiltonian(HamiltonianTag::kZero, sample, params).matrix;

  std::vector<ComplexMatrix> rounds;
  for (int k = 1; k <= params.rounds(); ++k) {
    const double tau = std::ldexp(params.t(), params.rounds() - k);
    rounds.push_back(u_minus * linalg::expm_hermitian(h_zero, tau) * u_plus);
  }

  const Eigen::Index dim = Eigen::Index{1} << params.num_qubits();
  StateVector target = StateVector::Zero(dim);
  target(static_cast<Eigen::Index>(channel::basis_index(bits))) = 1.0;

  OracleResult out;
  const std::size_t outcomes = std::size_t{1} << params.rounds();
  out.distribution.rounds = params.rounds();
  out.distribution.method = channel::Method::kOracle;
  out.distribution.probs.assign(outcomes, 0.0);
  out.target_states.assign(outcomes, StateVector());
  trajectory::FeedbackHistory history;
  enumerate(rounds, target, history, out);
  return out;
}

}  // namespace pme::oracle
