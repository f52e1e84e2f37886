#pragma once

// Flat "key = value" run configuration. Frequencies are entered as
// (angular frequency) / 2pi in kHz and durations in ms; conversion to the
// library's rad/us and us happens once, in to_experiment_config().
//
//   g_over_2pi_khz        coupling g / 2pi            (default 100)
//   sigma_g_over_2pi_khz  detuning width / 2pi        (default 1)
//   t_rule                scaled_by_sqrtN | fixed     (default scaled_by_sqrtN)
//   t_sqrtN_ms            t sqrt(N) for scaled rule   (default 0.16)
//   t_ms                  t for the fixed rule
//   L_list, N_list        comma lists, "a..b" ranges allowed (required)
//   n_samples             detuning draws per point    (default 1000)
//   seed                  unsigned 64-bit             (default 1)
//   probe_convention      shift_on_one | shift_on_zero
//   gate_model            approximate | exact
//   purity_weighting      probability | uniform
//   detunings_khz         fixed detunings / 2pi (distribution command only)
//   initial_bits          target bits (distribution command only)
//
// '#' starts a comment. Unknown and duplicate keys are errors.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pme/experiments.hpp"

namespace pme::cli {

class ConfigError : public std::runtime_error {
 public:
  ConfigError(int line, const std::string& field, const std::string& message);
  int line() const { return line_; }
  const std::string& field() const { return field_; }

 private:
  int line_;
  std::string field_;
};

struct RunConfig {
  double g_over_2pi_khz = 100.0;
  double sigma_g_over_2pi_khz = 1.0;
  experiments::TRule t_rule = experiments::TRule::kScaledBySqrtN;
  double t_sqrt_n_ms = 0.16;
  std::optional<double> t_ms;
  std::vector<int> rounds;
  std::vector<int> num_qubits;
  int n_samples = 1000;
  std::uint64_t seed = 1;
  model::ProbeConvention convention = model::ProbeConvention::kShiftOnOne;
  model::GateModel gates = model::GateModel::kApproximate;
  channel::PurityWeighting purity_weighting = channel::PurityWeighting::kProbability;
  std::vector<double> detunings_khz;
  std::vector<int> initial_bits;
};

/// Throws ConfigError naming the line and key on any problem.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

/// All keys in sorted order with normalized values; parse_config of the
/// result reproduces the same canonical text.
std::string canonicalize(const RunConfig& config);

/// Hex SHA-256 of the canonical text.
std::string config_hash(const RunConfig& config);

/// Cartesian sweep N_list x L_list (N outer). Throws ConfigError if the
/// configured parameters are invalid.
experiments::ExperimentConfig to_experiment_config(const RunConfig& config, unsigned threads);

/// Detunings in rad/us.
model::DetuningSample fixed_detunings(const RunConfig& config);

}  // namespace pme::cli
