#include "cli/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <functional>
#include <iomanip>
#include <ostream>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cli/config.hpp"
#include "cli/format.hpp"
#include "pme/channel.hpp"
#include "pme/error.hpp"
#include "pme/experiments.hpp"
#include "pme/oracle.hpp"
#include "pme/trajectory.hpp"

#ifndef PME_VERSION
#define PME_VERSION "unknown"
#endif

namespace pme::cli {

namespace {

using experiments::ExperimentRecord;

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvariantFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string utc_now() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream ss;
  ss.imbue(std::locale::classic());
  ss << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return ss.str();
}

bool to_stdout(const std::string& path) { return path.empty() || path == "-"; }

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open '" + path + "' for writing");
  f << content;
  f.flush();
  if (!f) throw IoError("failed writing '" + path + "'");
}

struct Table {
  std::string csv;
  nlohmann::json records = nlohmann::json::array();
};

struct Emitted {
  std::string command;
  std::string started;
};

void emit(const CommandOptions& opt, const RunConfig& cfg, const Emitted& info, const Table& table,
          std::ostream& out) {
  if (to_stdout(opt.out_path)) {
    out << table.csv;
    return;
  }
  write_file(opt.out_path, table.csv);
  nlohmann::ordered_json manifest;
  manifest["tool"] = "pme";
  manifest["version"] = PME_VERSION;
  manifest["command"] = info.command;
  manifest["config_path"] = opt.config_path;
  manifest["config_hash"] = config_hash(cfg);
  manifest["config"] = canonicalize(cfg);
  manifest["threads"] = opt.threads;
  manifest["started_utc"] = info.started;
  manifest["finished_utc"] = utc_now();
  manifest["outputs"] = {opt.out_path};
  manifest["records"] = table.records;
  write_file(opt.out_path + ".json", manifest.dump(2) + "\n");
}

RunConfig load(const CommandOptions& opt) {
  RunConfig cfg = load_config(opt.config_path);
  if (opt.seed) cfg.seed = *opt.seed;
  return cfg;
}

int guarded(const std::function<void()>& body, std::ostream& err) {
  try {
    body();
    return kOk;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const ValidationError& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const ResourceError& e) {
    err << "resource guard: " << e.what() << "\n";
    return kResourceError;
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << "\n";
    return kIoError;
  } catch (const InvariantFailure& e) {
    err << "invariant failure: " << e.what() << "\n";
    return kInvariantFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kInvariantFailure;
  }
}

nlohmann::json record_json(const ExperimentRecord& r) {
  return {{"N", r.num_qubits}, {"L", r.rounds}, {"wall_time_s", r.wall_time}, {"phase_wraps", r.phase_wraps}};
}

using Runner = std::vector<ExperimentRecord> (*)(const experiments::ExperimentConfig&);

int run_experiment(const char* name, Runner runner, const std::vector<std::string>& value_columns,
                   std::vector<std::string> (*values)(const ExperimentRecord&), const CommandOptions& opt,
                   std::ostream& out, std::ostream& err) {
  return guarded(
      [&] {
        const Emitted info{name, utc_now()};
        const RunConfig cfg = load(opt);
        const auto records = runner(to_experiment_config(cfg, opt.threads));
        Table table;
        std::vector<std::string> header{"N", "L", "seed"};
        header.insert(header.end(), value_columns.begin(), value_columns.end());
        if (opt.timing) header.emplace_back("wall_time");
        table.csv = csv_row(header);
        for (const auto& r : records) {
          std::vector<std::string> row{std::to_string(r.num_qubits), std::to_string(r.rounds), std::to_string(r.seed)};
          for (auto& v : values(r)) row.push_back(std::move(v));
          if (opt.timing) row.push_back(format_double(r.wall_time));
          table.csv += csv_row(row);
          table.records.push_back(record_json(r));
          if (r.phase_wraps > 0) {
            err << "warning: N=" << r.num_qubits << " L=" << r.rounds << ": " << r.phase_wraps
                << " samples encode a phase outside [-1/2, 1/2)\n";
          }
        }
        emit(opt, cfg, info, table, out);
      },
      err);
}

}  // namespace

int cmd_variance(const CommandOptions& opt, std::ostream& out, std::ostream& err) {
  return run_experiment("variance", &experiments::variance_experiment, {"sigma", "stderr"},
                        [](const ExperimentRecord& r) {
                          return std::vector<std::string>{format_double(r.sigma), format_double(r.sigma_stderr)};
                        },
                        opt, out, err);
}

int cmd_error(const CommandOptions& opt, std::ostream& out, std::ostream& err) {
  return run_experiment("error", &experiments::error_experiment, {"epsilon_numeric", "stderr", "epsilon_analytic"},
                        [](const ExperimentRecord& r) {
                          return std::vector<std::string>{format_double(r.epsilon_numeric),
                                                          format_double(r.epsilon_stderr),
                                                          format_double(r.epsilon_analytic)};
                        },
                        opt, out, err);
}

int cmd_purity(const CommandOptions& opt, std::ostream& out, std::ostream& err) {
  return run_experiment("purity", &experiments::purity_experiment, {"purity", "stderr"},
                        [](const ExperimentRecord& r) {
                          return std::vector<std::string>{format_double(r.purity), format_double(r.purity_stderr)};
                        },
                        opt, out, err);
}

int cmd_distribution(const CommandOptions& opt, std::ostream& out, std::ostream& err) {
  return guarded(
      [&] {
        const Emitted info{"distribution", utc_now()};
        const RunConfig cfg = load(opt);
        const auto exp = to_experiment_config(cfg, opt.threads);
        exp.validate();
        Table table;
        table.csv = csv_row({"N", "L", "m", "f_m", "probability", "fidelity_weight"});
        for (const auto& point : exp.sweep) {
          const auto params = experiments::params_for(exp, point);
          model::DetuningSample sample;
          if (!cfg.detunings_khz.empty()) {
            sample = fixed_detunings(cfg);
            if (static_cast<int>(sample.deltas.size()) != point.num_qubits) {
              throw ConfigError(0, "detunings_khz", "has " + std::to_string(sample.deltas.size()) +
                                                        " entries but N = " + std::to_string(point.num_qubits));
            }
          } else {
            sample = experiments::sample_detunings(cfg.seed, 0, point.num_qubits, params.sigma_g());
          }
          std::vector<int> bits = cfg.initial_bits;
          if (bits.empty()) bits.assign(point.num_qubits, 0);
          if (static_cast<int>(bits.size()) != point.num_qubits) {
            throw ConfigError(0, "initial_bits", "has " + std::to_string(bits.size()) + " entries but N = " +
                                                     std::to_string(point.num_qubits));
          }
          model::check_sample(sample, params, bits);
          const auto image = channel::kraus_image(sample, params, bits);
          const auto b = static_cast<Eigen::Index>(channel::basis_index(bits));
          for (Eigen::Index m = 0; m < image.rows(); ++m) {
            table.csv += csv_row({std::to_string(point.num_qubits), std::to_string(point.rounds), std::to_string(m),
                                  format_double(channel::estimate_from_outcome(static_cast<int>(m), point.rounds)),
                                  format_double(image.row(m).squaredNorm()), format_double(std::norm(image(m, b)))});
          }
          table.records.push_back({{"N", point.num_qubits},
                                    {"L", point.rounds},
                                    {"encoded_phase", channel::encoded_phase(sample, bits, params)}});
        }
        emit(opt, cfg, info, table, out);
      },
      err);
}

int cmd_selfcheck(const SelfcheckOptions& options, std::ostream& out, std::ostream& err) {
  const auto order = options.flip_round_order ? channel::RoundOrder::kShortestFirst : channel::RoundOrder::kLongestFirst;
  struct Suite {
    const char* name;
    double tolerance;
    double residual = 0.0;
  };
  Suite completeness{"completeness", 1e-9};
  Suite oracle_eq{"oracle_equivalence", 1e-9};
  Suite paths{"path_consistency", 1e-9};

  const int code = guarded(
      [&] {
        std::mt19937_64 rng(20240611);
        std::uniform_real_distribution<double> unit(-1.0, 1.0);
        std::uniform_real_distribution<double> duration(5.0, 40.0);
        const double g = model::khz_to_rad_per_us(100.0);
        for (int n = 1; n <= 2; ++n) {
          for (int l = 1; l <= 4; ++l) {
            for (int draw = 0; draw < 3; ++draw) {
              const model::ProtocolParams params(g, duration(rng), l, n, 0.0);
              model::DetuningSample sample;
              for (int j = 0; j < n; ++j) sample.deltas.push_back(0.1 * g * unit(rng));
              std::vector<int> bits(n);
              for (int j = 0; j < n; ++j) bits[j] = (draw + j) % 2;

              const auto ops = channel::kraus_operators(sample, params, order);
              linalg::ComplexMatrix sum = linalg::ComplexMatrix::Zero(ops[0].rows(), ops[0].cols());
              for (const auto& v : ops) sum += v.adjoint() * v;
              sum -= linalg::ComplexMatrix::Identity(sum.rows(), sum.cols());
              completeness.residual = std::max(completeness.residual, linalg::max_abs(sum));

              const auto fast = channel::outcome_distribution(sample, params, bits, order);
              const auto dense = oracle::simulate_full_circuit(sample, params, bits).distribution;
              for (std::size_t m = 0; m < fast.probs.size(); ++m) {
                oracle_eq.residual = std::max(oracle_eq.residual, std::abs(fast.probs[m] - dense.probs[m]));
                trajectory::FeedbackHistory path;
                for (int k = 0; k < l; ++k) path.bits.push_back(static_cast<int>((m >> k) & 1U));
                const double p = trajectory::path_probability(path, sample, params, bits);
                paths.residual = std::max(paths.residual, std::abs(p - fast.probs[m]));
              }
            }
          }
        }
      },
      err);
  if (code != kOk) return code;

  bool ok = true;
  out << std::scientific << std::setprecision(3);
  for (const auto* s : {&completeness, &oracle_eq, &paths}) {
    const bool pass = s->residual <= s->tolerance;
    ok = ok && pass;
    out << s->name << " max_residual=" << s->residual << " tolerance=" << s->tolerance << " "
        << (pass ? "PASS" : "FAIL") << "\n";
    if (!pass) err << "selfcheck: suite '" << s->name << "' failed\n";
  }
  return ok ? kOk : kInvariantFailure;
}

}  // namespace pme::cli
