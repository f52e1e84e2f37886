#include "pme/experiments.hpp"

#include <chrono>
#include <cmath>
#include <string>

#include "pme/error.hpp"
#include "pme/parallel.hpp"
#include "pme/random.hpp"

namespace pme::experiments {

namespace {

struct MeanStderr {
  double mean = 0.0;
  double stderr_ = 0.0;
};

// Sequential, index-ordered reduction.
MeanStderr summarize(const std::vector<double>& values) {
  MeanStderr out;
  const auto n = static_cast<double>(values.size());
  for (double v : values) out.mean += v;
  out.mean /= n;
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - out.mean) * (v - out.mean);
    out.stderr_ = std::sqrt(ss / (n - 1.0) / n);
  }
  return out;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

ExperimentRecord blank_record(const ExperimentConfig& config, SweepPoint point) {
  ExperimentRecord r;
  r.num_qubits = point.num_qubits;
  r.rounds = point.rounds;
  r.seed = config.seed;
  return r;
}

std::vector<DetuningSample> draw_samples(const ExperimentConfig& config, int num_qubits) {
  std::vector<DetuningSample> out;
  out.reserve(static_cast<std::size_t>(config.n_samples));
  for (int l = 0; l < config.n_samples; ++l) {
    out.push_back(sample_detunings(config.seed, static_cast<std::uint64_t>(l), num_qubits, config.base.sigma_g()));
  }
  return out;
}

}  // namespace

void ExperimentConfig::validate(int min_rounds) const {
  if (sweep.empty()) throw ValidationError("experiment sweep is empty");
  if (n_samples < 1) throw ValidationError("n_samples must be >= 1");
  if (t_rule == TRule::kScaledBySqrtN && !(std::isfinite(t_sqrt_n) && t_sqrt_n > 0.0)) {
    throw ValidationError("t_sqrtN must be positive");
  }
  for (const auto& p : sweep) {
    if (p.num_qubits < 1) throw ValidationError("sweep point has N < 1");
    if (p.rounds < min_rounds) {
      throw ValidationError("sweep point has L = " + std::to_string(p.rounds) + " < " + std::to_string(min_rounds));
    }
  }
}

DetuningSample sample_detunings(std::uint64_t seed, std::uint64_t sample_index, int num_qubits, double sigma_g) {
  if (!(sigma_g >= 0.0)) throw ValidationError("sample_detunings: sigma_g must be >= 0");
  if (num_qubits < 1) throw ValidationError("sample_detunings: N must be >= 1");
  DetuningSample out;
  out.deltas.reserve(static_cast<std::size_t>(num_qubits));
  for (int j = 0; j < num_qubits; ++j) {
    std::mt19937_64 engine(random::derive_seed(seed, {sample_index, static_cast<std::uint64_t>(j)}));
    out.deltas.push_back(sigma_g * random::standard_normal(engine));
  }
  return out;
}

DetuningSample sample_detunings(std::mt19937_64& engine, int num_qubits, double sigma_g) {
  if (!(sigma_g >= 0.0)) throw ValidationError("sample_detunings: sigma_g must be >= 0");
  if (num_qubits < 1) throw ValidationError("sample_detunings: N must be >= 1");
  DetuningSample out;
  for (int j = 0; j < num_qubits; ++j) out.deltas.push_back(sigma_g * random::standard_normal(engine));
  return out;
}

double choose_t(int num_qubits, TRule rule, double t_sqrt_n, double t_fixed) {
  if (num_qubits < 1) throw ValidationError("choose_t: N must be >= 1");
  if (rule == TRule::kFixed) return t_fixed;
  return t_sqrt_n / std::sqrt(static_cast<double>(num_qubits));
}

ProtocolParams params_for(const ExperimentConfig& config, SweepPoint point) {
  const double t = choose_t(point.num_qubits, config.t_rule, config.t_sqrt_n, config.base.t());
  return ProtocolParams(config.base.g(), t, point.rounds, point.num_qubits, config.base.sigma_g(),
                        config.base.convention(), config.base.gates());
}

double rms_phase_error(const channel::OutcomeDistribution& dist, double reference) {
  double sum = 0.0;
  for (std::size_t m = 0; m < dist.probs.size(); ++m) {
    const double err = channel::estimate_from_outcome(static_cast<int>(m), dist.rounds) - reference;
    sum += dist.probs[m] * err * err;
  }
  return std::sqrt(sum);
}

std::vector<ExperimentRecord> variance_experiment(const ExperimentConfig& config) {
  config.validate();
  std::vector<ExperimentRecord> records;
  for (const auto& point : config.sweep) {
    const auto start = std::chrono::steady_clock::now();
    const ProtocolParams params = params_for(config, point);
    const std::vector<int> bits(static_cast<std::size_t>(point.num_qubits), 0);
    const auto samples = draw_samples(config, point.num_qubits);
    std::vector<double> sigma(samples.size());
    std::vector<char> wrapped(samples.size(), 0);
    parallel_for(samples.size(), config.threads, [&](std::size_t l) {
      const double reference = channel::encoded_phase(samples[l], bits, params);
      wrapped[l] = std::abs(reference) >= 0.5 ? 1 : 0;
      sigma[l] = rms_phase_error(channel::outcome_distribution(samples[l], params, bits), reference);
    });
    ExperimentRecord r = blank_record(config, point);
    const auto s = summarize(sigma);
    r.sigma = s.mean;
    r.sigma_stderr = s.stderr_;
    for (char w : wrapped) r.phase_wraps += w;
    r.wall_time = seconds_since(start);
    records.push_back(r);
  }
  return records;
}

std::vector<ExperimentRecord> error_experiment(const ExperimentConfig& config) {
  config.validate();
  std::vector<ExperimentRecord> records;
  for (const auto& point : config.sweep) {
    const auto start = std::chrono::steady_clock::now();
    const ProtocolParams params = params_for(config, point);
    const std::vector<int> bits(static_cast<std::size_t>(point.num_qubits), 0);
    const auto samples = draw_samples(config, point.num_qubits);
    std::vector<double> eps(samples.size());
    parallel_for(samples.size(), config.threads, [&](std::size_t l) {
      eps[l] = 1.0 - channel::average_fidelity(samples[l], params, bits).fidelity;
    });
    ExperimentRecord r = blank_record(config, point);
    const auto s = summarize(eps);
    r.epsilon_numeric = s.mean;
    r.epsilon_stderr = s.stderr_;
    r.epsilon_analytic = channel::analytic_projection_error_total(params);
    r.wall_time = seconds_since(start);
    records.push_back(r);
  }
  return records;
}

std::vector<ExperimentRecord> purity_experiment(const ExperimentConfig& config) {
  config.validate(0);
  std::vector<ExperimentRecord> records;
  for (const auto& point : config.sweep) {
    if (point.num_qubits > channel::kMaxPurityQubits) {
      throw ResourceError("purity_experiment: N = " + std::to_string(point.num_qubits) + " exceeds guard " +
                          std::to_string(channel::kMaxPurityQubits));
    }
    const auto start = std::chrono::steady_clock::now();
    ExperimentRecord r = blank_record(config, point);
    if (point.rounds == 0) {
      r.purity = std::ldexp(1.0, -point.num_qubits);
    } else {
      const ProtocolParams params = params_for(config, point);
      const auto samples = draw_samples(config, point.num_qubits);
      std::vector<double> purity(samples.size());
      parallel_for(samples.size(), config.threads, [&](std::size_t l) {
        purity[l] = channel::purity(samples[l], params, config.purity_weighting);
      });
      const auto s = summarize(purity);
      r.purity = s.mean;
      r.purity_stderr = s.stderr_;
    }
    r.wall_time = seconds_since(start);
    records.push_back(r);
  }
  return records;
}

}  // namespace pme::experiments
