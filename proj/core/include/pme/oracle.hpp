#pragma once

// Brute-force reference for the factorized fast paths: the probe and all
// targets as one dense 2^{N+1} state, whole-system rotating-frame
// Hamiltonians, dense exponentials, and exact enumeration of every
// measurement path. Exponential in N and L; guarded.
//
// Register layout: the probe is qubit 0 (most significant), target j is
// qubit j.

#include <vector>

#include "pme/channel.hpp"
#include "pme/linalg.hpp"
#include "pme/model.hpp"

namespace pme::oracle {

using linalg::ComplexMatrix;
using linalg::StateVector;

inline constexpr int kMaxHamiltonianQubits = 10;
inline constexpr int kMaxCircuitQubits = 3;
inline constexpr int kMaxCircuitRounds = 6;

enum class HamiltonianTag { kPlus, kMinus, kZero };

struct FullSystemHamiltonian {
  HamiltonianTag tag;
  ComplexMatrix matrix;
};

/// H_+ / H_- (lambda_P = 0, lambda_T = +-lambda) or H_0 (lambda_P = lambda_T = g = 0):
///   sum_j (g/2)(1 + c sz_P) sz_j + (delta_j/2) sz_j + (lambda_T/2) sx_j
/// with c = +1 when the shift sits on |0>_P and c = -1 when it sits on |1>_P.
FullSystemHamiltonian build_hamiltonian(HamiltonianTag tag, const model::DetuningSample& sample,
                                        const model::ProtocolParams& params);

/// Block <p|H|p> acting on the targets for probe state |p>.
ComplexMatrix probe_block(const ComplexMatrix& full, int probe_bit);

struct OracleResult {
  channel::OutcomeDistribution distribution;
  std::vector<StateVector> target_states;  // unnormalized, indexed by m
};

/// Simulates every round (probe |+>, e^{-iH_+ pi/lambda}, e^{-iH_0 2^{L-k} t},
/// e^{-iH_- pi/lambda}, diag(1, phi'_k), Hadamard, Z readout, reset) for all
/// 2^L outcome paths. Only the physical Hamiltonians are simulated, so
/// GateModel::kExact is rejected.
OracleResult simulate_full_circuit(const model::DetuningSample& sample, const model::ProtocolParams& params,
                                   std::span<const int> bits);

}  // namespace pme::oracle
