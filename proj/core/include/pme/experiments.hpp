#pragma once

// Monte-Carlo sweeps over Gaussian detunings: estimator spread, projection
// error (numeric and perturbative), and purity after measurement.

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "pme/channel.hpp"
#include "pme/model.hpp"

namespace pme::experiments {

using model::DetuningSample;
using model::ProtocolParams;

enum class TRule { kFixed, kScaledBySqrtN };

struct SweepPoint {
  int num_qubits = 1;
  int rounds = 1;
};

struct ExperimentConfig {
  explicit ExperimentConfig(ProtocolParams base_params) : base(std::move(base_params)) {}

  // g, sigma_g, convention and gate model are taken from here; t is used
  // as-is under TRule::kFixed. N and L come from the sweep.
  ProtocolParams base;
  int n_samples = 1000;
  std::uint64_t seed = 1;
  std::vector<SweepPoint> sweep;
  TRule t_rule = TRule::kScaledBySqrtN;
  double t_sqrt_n = 160.0;  // us, t * sqrt(N) under kScaledBySqrtN
  channel::PurityWeighting purity_weighting = channel::PurityWeighting::kProbability;
  unsigned threads = 1;

  /// Throws ValidationError on an empty sweep, N_r < 1, or a sweep point
  /// with N < 1 or L < min_rounds.
  void validate(int min_rounds = 1) const;
};

struct ExperimentRecord {
  int num_qubits = 0;
  int rounds = 0;
  std::uint64_t seed = 0;
  double sigma = 0.0;
  double sigma_stderr = 0.0;
  double epsilon_numeric = 0.0;
  double epsilon_stderr = 0.0;
  double epsilon_analytic = 0.0;
  double purity = 0.0;
  double purity_stderr = 0.0;
  double wall_time = 0.0;  // seconds
  int phase_wraps = 0;     // samples with |encoded phase| >= 1/2
};

/// N independent N(0, sigma_g^2) detunings. Qubit j of sample l is drawn from
/// an engine seeded with derive_seed(seed, {l, j}), so a sample does not
/// depend on sweep order, thread count, or on N for the qubits it shares.
DetuningSample sample_detunings(std::uint64_t seed, std::uint64_t sample_index, int num_qubits, double sigma_g);

/// Sequential draws from a caller-owned engine.
DetuningSample sample_detunings(std::mt19937_64& engine, int num_qubits, double sigma_g);

/// t for N target qubits: t_sqrt_n / sqrt(N) under kScaledBySqrtN, t_fixed
/// otherwise.
double choose_t(int num_qubits, TRule rule, double t_sqrt_n, double t_fixed);

/// Parameters for one sweep point.
ProtocolParams params_for(const ExperimentConfig& config, SweepPoint point);

/// sqrt(sum_m P_m (f_m - reference)^2).
double rms_phase_error(const channel::OutcomeDistribution& dist, double reference);

std::vector<ExperimentRecord> variance_experiment(const ExperimentConfig& config);
std::vector<ExperimentRecord> error_experiment(const ExperimentConfig& config);

/// Sweep points with L = 0 report the untouched maximally mixed value 1/2^N.
std::vector<ExperimentRecord> purity_experiment(const ExperimentConfig& config);

}  // namespace pme::experiments
