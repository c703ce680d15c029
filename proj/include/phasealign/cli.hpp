#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "json.hpp"

#include "phasealign/sim.hpp"
#include "phasealign/verify.hpp"

namespace phasealign::cli {

enum ExitCode : int {
  kSuccess = 0,
  kVerificationFailed = 1,
  kUsageError = 2,
  kIoError = 3,
};

/// Strict parse: every key optional, unknown keys rejected. Throws ConfigError
/// naming the offending field.
ExperimentConfig parse_config(const nlohmann::json& doc);

/// Inverse of parse_config, with every defaulted field spelled out.
nlohmann::json config_to_json(const ExperimentConfig& config);

/// %.17g, enough digits to round-trip any double.
std::string format_double(double value);

void write_curve_csv(std::ostream& os, const ExperimentResult& result);
void write_cdf_csv(std::ostream& os, const ExperimentResult& result);

struct RunOptions {
  std::optional<std::filesystem::path> config_path;  // defaults only when absent
  std::filesystem::path out_dir = ".";
  std::optional<double> snr_db_override;
  unsigned threads = 0;
};

/// Writes curve.csv, cdf.csv and manifest.json into out_dir.
int cmd_run(const RunOptions& options, std::ostream& out, std::ostream& err);

struct VerifyOptions {
  std::size_t max_n = 2;
  std::uint64_t seed = 1;
  ClosedFormUpdate closed_form = closed_form_update;  // replaceable for negative controls
};

inline constexpr std::size_t kMaxVerifyElements = 3;

int cmd_verify(const VerifyOptions& options, std::ostream& out, std::ostream& err);

}  // namespace phasealign::cli
