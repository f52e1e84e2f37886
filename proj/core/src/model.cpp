#include "pme/model.hpp"

#include <cmath>
#include <string>

#include "pme/error.hpp"

namespace pme::model {

using linalg::Mat2;

ProtocolParams::ProtocolParams(double g, double t, int rounds, int num_qubits, double sigma_g,
                               ProbeConvention convention, GateModel gates)
    : g_(g),
      lambda_(2.0 / std::sqrt(3.0) * g),
      t_(t),
      rounds_(rounds),
      num_qubits_(num_qubits),
      sigma_g_(sigma_g),
      convention_(convention),
      gates_(gates) {
  if (!(std::isfinite(g) && g > 0.0)) throw ValidationError("ProtocolParams: g must be positive");
  if (!(std::isfinite(t) && t > 0.0)) throw ValidationError("ProtocolParams: t must be positive");
  if (rounds < 1) throw ValidationError("ProtocolParams: L must be >= 1");
  if (num_qubits < 1) throw ValidationError("ProtocolParams: N must be >= 1");
  if (!(std::isfinite(sigma_g) && sigma_g >= 0.0)) throw ValidationError("ProtocolParams: sigma_g must be >= 0");
}

ProtocolParams ProtocolParams::with_t(double t) const {
  return ProtocolParams(g_, t, rounds_, num_qubits_, sigma_g_, convention_, gates_);
}
ProtocolParams ProtocolParams::with_rounds(int rounds) const {
  return ProtocolParams(g_, t_, rounds, num_qubits_, sigma_g_, convention_, gates_);
}
ProtocolParams ProtocolParams::with_num_qubits(int n) const {
  return ProtocolParams(g_, t_, rounds_, n, sigma_g_, convention_, gates_);
}
ProtocolParams ProtocolParams::with_sigma_g(double sigma_g) const {
  return ProtocolParams(g_, t_, rounds_, num_qubits_, sigma_g, convention_, gates_);
}
ProtocolParams ProtocolParams::with_gates(GateModel gates) const {
  return ProtocolParams(g_, t_, rounds_, num_qubits_, sigma_g_, convention_, gates);
}
ProtocolParams ProtocolParams::with_convention(ProbeConvention convention) const {
  return ProtocolParams(g_, t_, rounds_, num_qubits_, sigma_g_, convention, gates_);
}

void check_sample(const DetuningSample& sample, const ProtocolParams& params, std::span<const int> bits) {
  const auto n = static_cast<std::size_t>(params.num_qubits());
  if (sample.deltas.size() != n) {
    throw ValidationError("detuning sample has " + std::to_string(sample.deltas.size()) + " entries, expected " +
                          std::to_string(n));
  }
  for (double d : sample.deltas) {
    if (!std::isfinite(d)) throw ValidationError("detuning sample contains a non-finite value");
  }
  if (bits.empty()) return;
  if (bits.size() != n) throw ValidationError("initial bit string length does not match N");
  for (int b : bits) {
    if (b != 0 && b != 1) throw ValidationError("initial bits must be 0 or 1");
  }
}

RotatingFrame rotating_frame_reduce(const LabFrameParams& lab) {
  if (lab.omega_j.empty()) throw ValidationError("rotating_frame_reduce: need at least one target qubit");
  RotatingFrame out;
  out.sample.deltas.reserve(lab.omega_j.size());
  for (double w : lab.omega_j) {
    if (!std::isfinite(w)) throw ValidationError("rotating_frame_reduce: non-finite frequency");
    out.sample.deltas.push_back(w - lab.omega_av);
  }
  out.drive_probe = lab.omega_p;
  out.drive_target = lab.omega_av - lab.g;
  return out;
}

Mat2 conditional_hamiltonian(double delta, int probe_bit, DriveSign sign, const ProtocolParams& params) {
  if (probe_bit != 0 && probe_bit != 1) throw ValidationError("conditional_hamiltonian: probe bit must be 0 or 1");
  const bool shifted = probe_bit != params.flip_bit();
  const double dz = delta + (shifted ? 2.0 * params.g() : 0.0);
  const double drive = (sign == DriveSign::kPlus ? 0.5 : -0.5) * params.lambda();
  return 0.5 * dz * linalg::pauli_z() + drive * linalg::pauli_x();
}

Mat2 cnot_step_unitary(double delta, int probe_bit, DriveSign sign, const ProtocolParams& params) {
  return linalg::expm2_hermitian(conditional_hamiltonian(delta, probe_bit, sign, params), params.cnot_time());
}

namespace {

// Rabi formula for a pi/lambda pulse at detuning `detuning`.
double rabi_transfer(double detuning, double lambda) {
  const double rate2 = detuning * detuning + lambda * lambda;
  const double s = std::sin(std::sqrt(rate2) * std::numbers::pi / (2.0 * lambda));
  return lambda * lambda / rate2 * s * s;
}

}  // namespace

double flip_probability(double delta, const ProtocolParams& params) { return rabi_transfer(delta, params.lambda()); }

double stay_probability(double delta, const ProtocolParams& params) {
  return 1.0 - rabi_transfer(delta + 2.0 * params.g(), params.lambda());
}

Mat2 u_step(double delta, int probe_bit, double tau, const ProtocolParams& params) {
  if (tau < 0.0) throw ValidationError("u_step: tau must be >= 0");
  const Mat2 free = linalg::expm2_hermitian(0.5 * delta * linalg::pauli_z(), tau);
  if (params.gates() == GateModel::kExact) {
    if (probe_bit != params.flip_bit()) return free;
    const Mat2 x = linalg::pauli_x();
    return x * free * x;
  }
  return cnot_step_unitary(delta, probe_bit, DriveSign::kMinus, params) * free *
         cnot_step_unitary(delta, probe_bit, DriveSign::kPlus, params);
}

}  // namespace pme::model
