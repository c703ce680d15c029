// Command-line front end: `run` executes a Monte-Carlo experiment and writes
// CSV/JSON results, `verify` runs the randomized cross-checks.

#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "phasealign/cli.hpp"

int main(int argc, char** argv) {
  namespace cli = phasealign::cli;

  CLI::App app{"Amplitude-only phase alignment experiments"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Run a Monte-Carlo experiment");
  std::string config_path;
  std::string out_dir = ".";
  std::optional<double> snr_db;
  unsigned threads = 0;
  run->add_option("--config", config_path, "JSON experiment config (defaults if omitted)");
  run->add_option("--out", out_dir, "Output directory")->capture_default_str();
  run->add_option("--snr-db", snr_db, "Override the config's SNR in dB");
  run->add_option("--threads", threads, "Worker threads, 0 = hardware concurrency")->capture_default_str();

  auto* verify = app.add_subcommand("verify", "Cross-check the optimizer against reference oracles");
  std::size_t max_n = 2;
  std::uint64_t seed = 1;
  verify->add_option("--max-n", max_n, "Largest element count for brute-force checks (<= 3)")->capture_default_str();
  verify->add_option("--seed", seed, "Seed for the randomized checks")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? cli::kSuccess : cli::kUsageError;
  }

  if (*run) {
    cli::RunOptions options;
    if (!config_path.empty()) options.config_path = config_path;
    options.out_dir = out_dir;
    options.snr_db_override = snr_db;
    options.threads = threads;
    return cli::cmd_run(options, std::cout, std::cerr);
  }
  cli::VerifyOptions options;
  options.max_n = max_n;
  options.seed = seed;
  return cli::cmd_verify(options, std::cout, std::cerr);
}
