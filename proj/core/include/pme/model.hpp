#pragma once

// Protocol parameters and the per-qubit building blocks of the controlled
// evolution: conditional Hamiltonians, the approximate CNOT, and the
// CNOT / free evolution / CNOT step unitary.
//
// Units: angular frequencies in rad/us, durations in us.

#include <cstdint>
#include <numbers>
#include <vector>

#include "pme/linalg.hpp"

namespace pme::model {

// Which probe state carries the 2g coupling shift on the target qubits.
// kShiftOnOne: the shift sits on |1>_P, so the target is resonant (flipped)
// when the probe is |0>. kShiftOnZero is the literal (1 + sz_P) reading.
enum class ProbeConvention { kShiftOnOne, kShiftOnZero };

// kApproximate evolves under the rotating-frame Hamiltonians.
// kExact replaces each approximate CNOT by a perfect one (the g -> inf limit).
enum class GateModel { kApproximate, kExact };

enum class DriveSign { kPlus, kMinus };

/// Frequency in kHz / 2pi -> rad/us.
constexpr double khz_to_rad_per_us(double khz) { return 2.0 * std::numbers::pi * khz * 1e-3; }

class ProtocolParams {
 public:
  /// Validates g > 0, t > 0, L >= 1, N >= 1, sigma_g >= 0 and sets
  /// lambda = 2 g / sqrt(3).
  ProtocolParams(double g, double t, int rounds, int num_qubits, double sigma_g,
                 ProbeConvention convention = ProbeConvention::kShiftOnOne,
                 GateModel gates = GateModel::kApproximate);

  double g() const { return g_; }
  double lambda() const { return lambda_; }
  double t() const { return t_; }
  int rounds() const { return rounds_; }
  int num_qubits() const { return num_qubits_; }
  double sigma_g() const { return sigma_g_; }
  ProbeConvention convention() const { return convention_; }
  GateModel gates() const { return gates_; }

  /// Duration of one approximate CNOT, pi / lambda.
  double cnot_time() const { return std::numbers::pi / lambda_; }

  /// Probe bit for which the target is resonantly flipped.
  int flip_bit() const { return convention_ == ProbeConvention::kShiftOnOne ? 0 : 1; }

  ProtocolParams with_t(double t) const;
  ProtocolParams with_rounds(int rounds) const;
  ProtocolParams with_num_qubits(int n) const;
  ProtocolParams with_sigma_g(double sigma_g) const;
  ProtocolParams with_gates(GateModel gates) const;
  ProtocolParams with_convention(ProbeConvention convention) const;

 private:
  double g_;
  double lambda_;
  double t_;
  int rounds_;
  int num_qubits_;
  double sigma_g_;
  ProbeConvention convention_;
  GateModel gates_;
};

struct DetuningSample {
  std::vector<double> deltas;  // rad/us, one per target qubit
};

/// Throws ValidationError unless the sample has params.num_qubits() entries
/// and `bits` (if non-empty) has the same length with entries in {0, 1}.
void check_sample(const DetuningSample& sample, const ProtocolParams& params, std::span<const int> bits = {});

struct LabFrameParams {
  double omega_p = 0.0;
  double omega_av = 0.0;
  std::vector<double> omega_j;
  double g = 0.0;
  double lambda_p = 0.0;
  double lambda_t = 0.0;
};

struct RotatingFrame {
  DetuningSample sample;
  double drive_probe = 0.0;   // omega = omega_p
  double drive_target = 0.0;  // omega' = omega_av - g
};

/// Detunings delta_j = omega_j - omega_av and the drive frequencies that
/// produce the rotating-frame Hamiltonian.
RotatingFrame rotating_frame_reduce(const LabFrameParams& lab);

/// Target-qubit Hamiltonian while the probe sits in |probe_bit>:
/// ((delta + shift) / 2) sz +- (lambda / 2) sx with shift = 2g on the
/// convention's shifted probe state and 0 otherwise.
linalg::Mat2 conditional_hamiltonian(double delta, int probe_bit, DriveSign sign, const ProtocolParams& params);

/// exp(-i H pi / lambda) for the conditional Hamiltonian.
linalg::Mat2 cnot_step_unitary(double delta, int probe_bit, DriveSign sign, const ProtocolParams& params);

/// Rabi transition probability |<1|U|0>|^2 for a detuning `delta` from
/// resonance under drive lambda for time pi / lambda.
double flip_probability(double delta, const ProtocolParams& params);

/// |<0|U|0>|^2 for the off-resonant (2g-shifted) branch.
double stay_probability(double delta, const ProtocolParams& params);

/// U_{s,tau} = exp(-i H^- pi/lambda) exp(-i (delta/2) sz tau) exp(-i H^+ pi/lambda)
/// for one target qubit, or its perfect-CNOT counterpart under GateModel::kExact.
linalg::Mat2 u_step(double delta, int probe_bit, double tau, const ProtocolParams& params);

}  // namespace pme::model
