#pragma once

// Seeded Monte-Carlo experiments: fresh CN(0,1) gains per trial, the
// sequential method and/or the random baseline run on the same gains, and
// every power normalized by the full-knowledge optimum (sum_n |z_n|)^2.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "phasealign/optimizer.hpp"

namespace phasealign {

enum class Algorithm { Sequential, RandomBaseline, Both };
enum class InitPolicy { Zeros, UniformRandom };

/// Invalid experiment setting; field() names the offending config key.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::invalid_argument(field + ": " + message), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

struct ExperimentConfig {
  std::size_t n_elements = 100;
  std::size_t sweeps = 5;
  std::size_t trials = 1000;
  Algorithm algorithm = Algorithm::Both;
  std::optional<double> snr_db;  // absent: noiseless
  SnrReference snr_reference = SnrReference::PerElement;
  std::uint64_t master_seed = 20231016;
  std::size_t baseline_steps = 3000;
  InitPolicy init_policy = InitPolicy::Zeros;
  AngleTriple angle_triple = AngleTriple::standard();

  bool runs_sequential() const { return algorithm != Algorithm::RandomBaseline; }
  bool runs_baseline() const { return algorithm != Algorithm::Sequential; }

  /// Throws ConfigError.
  void validate() const;
};

/// Independent random streams derived from one per-trial seed.
enum class Stream : std::uint64_t {
  Channel = 1,
  Init = 2,
  SequentialNoise = 3,
  BaselineNoise = 4,
  BaselineProposals = 5,
};

std::uint64_t splitmix64(std::uint64_t x);

/// Seed for one stream of one trial: splitmix64 avalanche of
/// (master_seed, trial_index), then mixed with the stream tag.
std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t trial_index, Stream stream);

struct TrialResult {
  std::size_t trial_index = 0;
  double optimum = 0.0;  // (sum_n |z_n|)^2 of this trial's gains
  std::optional<OptimizationTrace> sequential;
  std::optional<OptimizationTrace> baseline;
};

/// Divides every sample's power and reading by bound.
OptimizationTrace normalize_trace(OptimizationTrace trace, double bound);

/// One Monte-Carlo trial with normalized traces. Bit-identical for equal
/// (config, trial_index).
TrialResult run_trial(const ExperimentConfig& config, std::size_t trial_index);

struct CurvePoint {
  std::uint64_t measurement_count;
  double mean_normalized_power;
  double std_error;
};

struct AggregateCurve {
  std::vector<CurvePoint> points;

  /// Mean at the last grid point <= count (first point if count precedes the grid).
  double mean_at(std::uint64_t count) const;

  /// Smallest grid count whose mean reaches level, if any.
  std::optional<std::uint64_t> first_reaching(double level) const;
};

/// Pointwise mean and standard error over a fixed grid of measurement
/// counts. Traces are resampled onto the grid by last value carried forward.
/// Deterministic for a given sequence of add() calls.
class CurveAccumulator {
 public:
  explicit CurveAccumulator(std::vector<std::uint64_t> grid);

  void add(const OptimizationTrace& trace);
  std::size_t count() const { return count_; }
  AggregateCurve curve() const;

 private:
  std::vector<std::uint64_t> grid_;
  std::vector<double> mean_;
  std::vector<double> m2_;
  std::size_t count_ = 0;
};

/// Mean curve over the union of the traces' measurement counts.
/// Throws std::invalid_argument on empty input.
AggregateCurve aggregate_mean_curve(std::span<const OptimizationTrace> traces);

struct CdfPoint {
  double value;
  double cumulative_probability;
};

struct CdfTable {
  std::vector<CdfPoint> points;

  /// Smallest value v with F(v) >= p, p in (0, 1].
  double quantile(double p) const;
  /// F(value): fraction of samples <= value.
  double evaluate(double value) const;
};

/// Right-continuous empirical CDF; one point per distinct value.
/// Throws std::invalid_argument on empty input.
CdfTable empirical_cdf(std::span<const double> values);

struct CdfSeries {
  Algorithm algorithm;  // Sequential or RandomBaseline
  std::size_t sweeps;
  std::vector<double> final_values;  // per trial, trial order
  CdfTable table;
};

struct ExperimentResult {
  ExperimentConfig config;
  std::optional<AggregateCurve> sequential_curve;
  std::optional<AggregateCurve> baseline_curve;
  std::vector<CdfSeries> cdfs;
};

/// Sweep counts at which CDFs are taken: every completed sweep for the
/// sequential method; 1, 10, 50 and the last completed sweep for the baseline.
std::vector<std::size_t> cdf_sweeps(const ExperimentConfig& config, Algorithm algorithm);

/// Measurement count at which `sweeps` complete sweeps are done.
std::uint64_t measurements_after_sweeps(const ExperimentConfig& config, Algorithm algorithm,
                                        std::size_t sweeps);

/// Runs all trials, possibly on several threads. The result depends only on
/// config. threads == 0 picks the hardware concurrency.
ExperimentResult run_experiment(const ExperimentConfig& config, unsigned threads = 0);

const char* to_string(Algorithm algorithm);
const char* to_string(InitPolicy policy);
const char* to_string(SnrReference reference);

}  // namespace phasealign
