#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

namespace pme::cli {

enum ExitCode : int {
  kOk = 0,
  kIoError = 1,
  kConfigError = 2,
  kResourceError = 3,
  kInvariantFailure = 4,
};

struct CommandOptions {
  std::string config_path;
  std::string out_path;  // empty or "-" writes CSV to `out` and skips the manifest
  std::optional<std::uint64_t> seed;
  unsigned threads = 1;
  bool timing = false;  // append a wall_time column (makes the CSV run-dependent)
};

int cmd_variance(const CommandOptions& options, std::ostream& out, std::ostream& err);
int cmd_error(const CommandOptions& options, std::ostream& out, std::ostream& err);
int cmd_purity(const CommandOptions& options, std::ostream& out, std::ostream& err);

/// P_m and P_m F_m for one detuning sample per sweep point: detunings_khz if
/// set, otherwise sample 0 of the seeded stream.
int cmd_distribution(const CommandOptions& options, std::ostream& out, std::ostream& err);

struct SelfcheckOptions {
  bool flip_round_order = false;  // debug: evaluate the Kraus path in the wrong round order
};

/// Completeness, oracle equivalence and path consistency at N <= 2, L <= 4.
int cmd_selfcheck(const SelfcheckOptions& options, std::ostream& out, std::ostream& err);

}  // namespace pme::cli
