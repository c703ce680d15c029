#include "phasealign/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <set>
#include <sstream>

#ifndef PHASEALIGN_VERSION
#define PHASEALIGN_VERSION "0.0.0"
#endif

namespace phasealign::cli {

using nlohmann::json;

namespace {

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys{"n_elements", "sweeps",         "trials",      "algorithm",
                                          "snr_db",     "snr_reference",  "master_seed", "baseline_steps",
                                          "init_policy", "angle_triple"};
  return keys;
}

std::uint64_t read_unsigned(const json& doc, const std::string& key) {
  const json& v = doc.at(key);
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer()) {
    const std::int64_t signed_value = v.get<std::int64_t>();
    if (signed_value < 0) throw ConfigError(key, "must not be negative");
    return static_cast<std::uint64_t>(signed_value);
  }
  throw ConfigError(key, "must be a nonnegative integer");
}

double read_number(const json& v, const std::string& key) {
  if (!v.is_number()) throw ConfigError(key, "must be a number");
  return v.get<double>();
}

std::optional<double> read_snr(const json& v) {
  if (v.is_null()) return std::nullopt;
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    if (s == "inf" || s == "+inf") return std::numeric_limits<double>::infinity();
    throw ConfigError("snr_db", "must be a number, null, or \"inf\"");
  }
  return read_number(v, "snr_db");
}

Algorithm read_algorithm(const json& v) {
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    if (s == "sequential") return Algorithm::Sequential;
    if (s == "random_baseline") return Algorithm::RandomBaseline;
    if (s == "both") return Algorithm::Both;
  }
  throw ConfigError("algorithm", "must be one of \"sequential\", \"random_baseline\", \"both\"");
}

InitPolicy read_init_policy(const json& v) {
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    if (s == "zeros") return InitPolicy::Zeros;
    if (s == "uniform_random") return InitPolicy::UniformRandom;
  }
  throw ConfigError("init_policy", "must be \"zeros\" or \"uniform_random\"");
}

SnrReference read_snr_reference(const json& v) {
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    if (s == "total") return SnrReference::Total;
    if (s == "per_element") return SnrReference::PerElement;
  }
  throw ConfigError("snr_reference", "must be \"total\" or \"per_element\"");
}

AngleTriple read_angles(const json& v) {
  if (!v.is_array() || v.size() != 3) throw ConfigError("angle_triple", "must be an array of three angles");
  try {
    return AngleTriple(read_number(v[0], "angle_triple"), read_number(v[1], "angle_triple"),
                       read_number(v[2], "angle_triple"));
  } catch (const DegenerateAnglesError& e) {
    throw ConfigError("angle_triple", e.what());
  }
}

std::string utc_timestamp(std::chrono::system_clock::time_point t) {
  const std::time_t raw = std::chrono::system_clock::to_time_t(t);
  std::tm tm{};
  gmtime_r(&raw, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

json curve_summary(const ExperimentConfig& config, const AggregateCurve& curve, Algorithm algorithm) {
  const std::uint64_t one_sweep = measurements_after_sweeps(config, Algorithm::Sequential, 1);
  return {
      {"algorithm", to_string(algorithm)},
      {"mean_normalized_power_at_3n_measurements", curve.mean_at(one_sweep)},
      {"final_measurements", curve.points.back().measurement_count},
      {"final_mean_normalized_power", curve.points.back().mean_normalized_power},
      {"final_std_error", curve.points.back().std_error},
  };
}

std::string noise_description(const ExperimentConfig& config) {
  if (!config.snr_db) return "noiseless";
  const char* reference =
      config.snr_reference == SnrReference::Total ? "sum_n |z_n|^2" : "sum_n |z_n|^2 / N";
  return std::string("complex AWGN on the combined field before detection, sigma^2 = ") + reference +
         " / 10^(snr_db/10)";
}

bool write_file(const std::filesystem::path& path, const std::string& content, std::ostream& err) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) {
    err << "error: cannot open " << path.string() << " for writing\n";
    return false;
  }
  os << content;
  os.flush();
  if (!os) {
    err << "error: failed writing " << path.string() << "\n";
    return false;
  }
  return true;
}

}  // namespace

ExperimentConfig parse_config(const json& doc) {
  if (!doc.is_object()) throw ConfigError("config", "must be a JSON object");
  for (const auto& [key, value] : doc.items()) {
    if (!known_keys().contains(key)) throw ConfigError(key, "unknown key");
  }

  ExperimentConfig config;
  if (doc.contains("n_elements")) config.n_elements = read_unsigned(doc, "n_elements");
  if (doc.contains("sweeps")) config.sweeps = read_unsigned(doc, "sweeps");
  if (doc.contains("trials")) config.trials = read_unsigned(doc, "trials");
  if (doc.contains("baseline_steps")) config.baseline_steps = read_unsigned(doc, "baseline_steps");
  if (doc.contains("master_seed")) config.master_seed = read_unsigned(doc, "master_seed");
  if (doc.contains("algorithm")) config.algorithm = read_algorithm(doc.at("algorithm"));
  if (doc.contains("init_policy")) config.init_policy = read_init_policy(doc.at("init_policy"));
  if (doc.contains("snr_db")) config.snr_db = read_snr(doc.at("snr_db"));
  if (doc.contains("snr_reference")) config.snr_reference = read_snr_reference(doc.at("snr_reference"));
  if (doc.contains("angle_triple")) config.angle_triple = read_angles(doc.at("angle_triple"));
  config.validate();
  return config;
}

json config_to_json(const ExperimentConfig& config) {
  json snr = nullptr;
  if (config.snr_db) snr = std::isinf(*config.snr_db) ? json("inf") : json(*config.snr_db);
  const auto& phi = config.angle_triple.values();
  return {
      {"n_elements", config.n_elements},
      {"sweeps", config.sweeps},
      {"trials", config.trials},
      {"algorithm", to_string(config.algorithm)},
      {"snr_db", snr},
      {"snr_reference", to_string(config.snr_reference)},
      {"master_seed", config.master_seed},
      {"baseline_steps", config.baseline_steps},
      {"init_policy", to_string(config.init_policy)},
      {"angle_triple", json::array({phi[0], phi[1], phi[2]})},
  };
}

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

void write_curve_csv(std::ostream& os, const ExperimentResult& result) {
  os << "measurements,mean_normalized_power,std_error,algorithm\n";
  auto emit = [&](const std::optional<AggregateCurve>& curve, Algorithm algorithm) {
    if (!curve) return;
    for (const CurvePoint& p : curve->points) {
      os << p.measurement_count << ',' << format_double(p.mean_normalized_power) << ','
         << format_double(p.std_error) << ',' << to_string(algorithm) << '\n';
    }
  };
  emit(result.sequential_curve, Algorithm::Sequential);
  emit(result.baseline_curve, Algorithm::RandomBaseline);
}

void write_cdf_csv(std::ostream& os, const ExperimentResult& result) {
  os << "normalized_power,cumulative_probability,algorithm,sweeps\n";
  for (const CdfSeries& series : result.cdfs) {
    for (const CdfPoint& p : series.table.points) {
      os << format_double(p.value) << ',' << format_double(p.cumulative_probability) << ','
         << to_string(series.algorithm) << ',' << series.sweeps << '\n';
    }
  }
}

int cmd_run(const RunOptions& options, std::ostream& out, std::ostream& err) {
  ExperimentConfig config;
  try {
    json doc = json::object();
    if (options.config_path) {
      std::ifstream is(*options.config_path);
      if (!is) {
        err << "error: cannot read config " << options.config_path->string() << "\n";
        return kIoError;
      }
      try {
        doc = json::parse(is);
      } catch (const json::parse_error& e) {
        err << "error: config is not valid JSON: " << e.what() << "\n";
        return kUsageError;
      }
    }
    config = parse_config(doc);
    if (options.snr_db_override) {
      config.snr_db = *options.snr_db_override;
      config.validate();
    }
  } catch (const ConfigError& e) {
    err << "error: invalid config field `" << e.field() << "`: " << e.what() << "\n";
    return kUsageError;
  }

  std::error_code ec;
  std::filesystem::create_directories(options.out_dir, ec);
  if (ec) {
    err << "error: cannot create output directory " << options.out_dir.string() << ": " << ec.message() << "\n";
    return kIoError;
  }

  const auto started = std::chrono::system_clock::now();
  const ExperimentResult result = run_experiment(config, options.threads);
  const auto finished = std::chrono::system_clock::now();

  const auto curve_path = options.out_dir / "curve.csv";
  const auto cdf_path = options.out_dir / "cdf.csv";
  const auto manifest_path = options.out_dir / "manifest.json";

  std::ostringstream curve;
  write_curve_csv(curve, result);
  std::ostringstream cdf;
  write_cdf_csv(cdf, result);

  json summary = json::array();
  if (result.sequential_curve) summary.push_back(curve_summary(config, *result.sequential_curve, Algorithm::Sequential));
  if (result.baseline_curve) {
    summary.push_back(curve_summary(config, *result.baseline_curve, Algorithm::RandomBaseline));
  }
  json stream_tags = {
      {"channel", static_cast<std::uint64_t>(Stream::Channel)},
      {"init", static_cast<std::uint64_t>(Stream::Init)},
      {"sequential_noise", static_cast<std::uint64_t>(Stream::SequentialNoise)},
      {"baseline_noise", static_cast<std::uint64_t>(Stream::BaselineNoise)},
      {"baseline_proposals", static_cast<std::uint64_t>(Stream::BaselineProposals)},
  };
  const json manifest = {
      {"artifact_version", PHASEALIGN_VERSION},
      {"config", config_to_json(config)},
      {"started", utc_timestamp(started)},
      {"finished", utc_timestamp(finished)},
      {"outputs", {{"curve", curve_path.string()}, {"cdf", cdf_path.string()}, {"manifest", manifest_path.string()}}},
      {"seeds", {{"master_seed", config.master_seed}, {"stream_tags", stream_tags}}},
      {"normalization", "power / (sum_n |z_n|)^2"},
      {"noise_model", noise_description(config)},
      {"summary", summary},
  };

  if (!write_file(curve_path, curve.str(), err) || !write_file(cdf_path, cdf.str(), err) ||
      !write_file(manifest_path, manifest.dump(2) + "\n", err)) {
    return kIoError;
  }

  for (const json& s : summary) {
    out << s.at("algorithm").get<std::string>() << ": mean normalized power "
        << format_double(s.at("final_mean_normalized_power").get<double>()) << " after "
        << s.at("final_measurements").get<std::uint64_t>() << " measurements\n";
  }
  out << "wrote " << curve_path.string() << ", " << cdf_path.string() << ", " << manifest_path.string() << "\n";
  return kSuccess;
}

int cmd_verify(const VerifyOptions& options, std::ostream& out, std::ostream& err) {
  if (options.max_n < 1 || options.max_n > kMaxVerifyElements) {
    err << "error: --max-n must be between 1 and " << kMaxVerifyElements << " (brute-force grid cap)\n";
    return kUsageError;
  }
  const std::size_t min_n = std::min<std::size_t>(2, options.max_n);
  const ElementSolver solver = solver_from(options.closed_form);

  std::vector<CheckReport> reports;
  reports.push_back(check_solver_equivalence(10'000, 10, options.seed, options.closed_form));
  reports.push_back(check_oracle_sandwich(options.max_n, 20, options.seed + 1));
  reports.push_back(check_cross_validation(options.max_n, 100, options.seed + 2, solver));
  reports.push_back(check_monotonicity(min_n, options.max_n, 100, 5, options.seed + 3, solver));
  reports.push_back(check_fixed_point(min_n, options.max_n, 100, 20, options.seed + 4, solver));

  out << std::left << std::setw(24) << "check" << std::setw(10) << "cases" << std::setw(14) << "worst"
      << "status\n";
  bool all_passed = true;
  for (const CheckReport& r : reports) {
    out << std::setw(24) << r.name << std::setw(10) << r.cases << std::setw(14) << std::setprecision(3)
        << r.worst << (r.passed() ? "PASS" : "FAIL") << "\n";
    all_passed = all_passed && r.passed();
  }
  if (all_passed) return kSuccess;

  err << "verification failed:\n";
  for (const CheckReport& r : reports) {
    if (r.passed()) continue;
    err << "  " << r.name << ": " << r.failed_cases << " of " << r.cases << " cases failed\n";
    for (const std::string& f : r.failures) err << "    " << f << "\n";
  }
  return kVerificationFailed;
}

}  // namespace phasealign::cli
