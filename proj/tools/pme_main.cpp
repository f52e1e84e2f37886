#include <iostream>

#include <CLI11.hpp>

#include "cli/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Single-probe projective measurement of energy: simulation sweeps and self-checks"};
  app.require_subcommand(1);

  pme::cli::CommandOptions opt;
  const auto add_run_flags = [&](CLI::App* sub) {
    sub->add_option("--config", opt.config_path, "Run configuration (key = value)")->required();
    sub->add_option("--out", opt.out_path, "CSV output path; a JSON manifest is written next to it");
    sub->add_option("--seed", opt.seed, "Override the configured seed");
    sub->add_option("--threads", opt.threads, "Worker threads")->check(CLI::PositiveNumber);
    sub->add_flag("--timing", opt.timing, "Append a wall_time column");
  };

  auto* variance = app.add_subcommand("variance", "Estimator spread sigma versus rounds");
  auto* error = app.add_subcommand("error", "Projection error, numeric and perturbative");
  auto* purity = app.add_subcommand("purity", "Purity after measuring a maximally mixed input");
  auto* distribution = app.add_subcommand("distribution", "Outcome distribution for one detuning sample");
  for (auto* sub : {variance, error, purity, distribution}) add_run_flags(sub);

  pme::cli::SelfcheckOptions check;
  auto* selfcheck = app.add_subcommand("selfcheck", "Run the internal consistency suites");
  selfcheck->add_flag("--flip-round-order", check.flip_round_order, "Debug: evaluate rounds in reverse order");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : pme::cli::kConfigError;
  }

  if (*variance) return pme::cli::cmd_variance(opt, std::cout, std::cerr);
  if (*error) return pme::cli::cmd_error(opt, std::cout, std::cerr);
  if (*purity) return pme::cli::cmd_purity(opt, std::cout, std::cerr);
  if (*distribution) return pme::cli::cmd_distribution(opt, std::cout, std::cerr);
  return pme::cli::cmd_selfcheck(check, std::cout, std::cerr);
}
