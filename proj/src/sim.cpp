#include "phasealign/sim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <random>
#include <thread>

namespace phasealign {

void ExperimentConfig::validate() const {
  if (n_elements < 1) throw ConfigError("n_elements", "must be at least 1");
  if (sweeps < 1) throw ConfigError("sweeps", "must be at least 1");
  if (trials < 1) throw ConfigError("trials", "must be at least 1");
  if (baseline_steps < 1) throw ConfigError("baseline_steps", "must be at least 1");
  if (snr_db && (std::isnan(*snr_db) || *snr_db == -INFINITY)) {
    throw ConfigError("snr_db", "must be a number above -inf");
  }
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t trial_index, Stream stream) {
  const std::uint64_t trial_seed = splitmix64(splitmix64(master_seed) ^ splitmix64(~trial_index));
  return splitmix64(trial_seed ^ (static_cast<std::uint64_t>(stream) * 0xD1B54A32D192ED03ULL));
}

OptimizationTrace normalize_trace(OptimizationTrace trace, double bound) {
  if (!(bound > 0.0)) throw std::invalid_argument("normalize_trace: bound must be positive");
  for (TraceSample& s : trace.samples) {
    s.power /= bound;
    if (s.reading) *s.reading /= bound;
  }
  return trace;
}

namespace {

PhaseVector initial_phases(const ExperimentConfig& config, std::size_t trial_index) {
  if (config.init_policy == InitPolicy::Zeros) return PhaseVector::zeros(config.n_elements);
  std::mt19937_64 rng(derive_seed(config.master_seed, trial_index, Stream::Init));
  std::uniform_real_distribution<double> uniform(0.0, kTwoPi);
  std::vector<double> phases(config.n_elements);
  for (double& p : phases) p = uniform(rng);
  return PhaseVector(std::move(phases));
}

MeasurementOracle make_oracle(const ExperimentConfig& config, const EffectiveGains& gains,
                              std::size_t trial_index, Stream noise_stream) {
  if (!config.snr_db) return MeasurementOracle(gains);
  return make_noisy_oracle(gains, *config.snr_db, derive_seed(config.master_seed, trial_index, noise_stream),
                           config.snr_reference);
}

std::vector<std::uint64_t> counts_of(const OptimizationTrace& trace) {
  std::vector<std::uint64_t> grid;
  grid.reserve(trace.samples.size());
  for (const TraceSample& s : trace.samples) grid.push_back(s.measurement_count);
  return grid;
}

}  // namespace

TrialResult run_trial(const ExperimentConfig& config, std::size_t trial_index) {
  config.validate();
  if (trial_index >= config.trials) throw std::invalid_argument("run_trial: trial_index out of range");

  const EffectiveGains gains =
      generate_channels(config.n_elements, derive_seed(config.master_seed, trial_index, Stream::Channel));
  const PhaseVector init = initial_phases(config, trial_index);

  TrialResult result;
  result.trial_index = trial_index;
  result.optimum = optimal_power_bound(gains);

  if (config.runs_sequential()) {
    MeasurementOracle oracle = make_oracle(config, gains, trial_index, Stream::SequentialNoise);
    SequentialOptions options{config.angle_triple, default_element_solver};
    result.sequential = normalize_trace(
        run_sequential(oracle, config.n_elements, config.sweeps, init, Ascending{}, options), result.optimum);
  }
  if (config.runs_baseline()) {
    MeasurementOracle oracle = make_oracle(config, gains, trial_index, Stream::BaselineNoise);
    const std::uint64_t proposal_seed = derive_seed(config.master_seed, trial_index, Stream::BaselineProposals);
    result.baseline = normalize_trace(
        run_random_baseline(oracle, config.n_elements, config.baseline_steps, proposal_seed, init),
        result.optimum);
  }
  return result;
}

double AggregateCurve::mean_at(std::uint64_t count) const {
  if (points.empty()) throw std::logic_error("aggregate curve: no points");
  auto it = std::upper_bound(points.begin(), points.end(), count,
                             [](std::uint64_t c, const CurvePoint& p) { return c < p.measurement_count; });
  if (it == points.begin()) return points.front().mean_normalized_power;
  return std::prev(it)->mean_normalized_power;
}

std::optional<std::uint64_t> AggregateCurve::first_reaching(double level) const {
  for (const CurvePoint& p : points) {
    if (p.mean_normalized_power >= level) return p.measurement_count;
  }
  return std::nullopt;
}

CurveAccumulator::CurveAccumulator(std::vector<std::uint64_t> grid)
    : grid_(std::move(grid)), mean_(grid_.size(), 0.0), m2_(grid_.size(), 0.0) {
  if (grid_.empty()) throw std::invalid_argument("curve accumulator: empty grid");
  if (!std::is_sorted(grid_.begin(), grid_.end()) ||
      std::adjacent_find(grid_.begin(), grid_.end()) != grid_.end()) {
    throw std::invalid_argument("curve accumulator: grid must be strictly increasing");
  }
}

void CurveAccumulator::add(const OptimizationTrace& trace) {
  if (trace.samples.empty()) throw std::invalid_argument("curve accumulator: trace has no samples");
  ++count_;
  const double n = static_cast<double>(count_);
  std::size_t s = 0;
  for (std::size_t g = 0; g < grid_.size(); ++g) {
    while (s + 1 < trace.samples.size() && trace.samples[s + 1].measurement_count <= grid_[g]) ++s;
    const double value = trace.samples[s].power;
    // Welford update
    const double delta = value - mean_[g];
    mean_[g] += delta / n;
    m2_[g] += delta * (value - mean_[g]);
  }
}

AggregateCurve CurveAccumulator::curve() const {
  if (count_ == 0) throw std::logic_error("curve accumulator: no traces added");
  AggregateCurve out;
  out.points.reserve(grid_.size());
  const double n = static_cast<double>(count_);
  for (std::size_t g = 0; g < grid_.size(); ++g) {
    double se = 0.0;
    if (count_ > 1) se = std::sqrt(std::max(m2_[g], 0.0) / (n - 1.0) / n);
    out.points.push_back({grid_[g], mean_[g], se});
  }
  return out;
}

AggregateCurve aggregate_mean_curve(std::span<const OptimizationTrace> traces) {
  if (traces.empty()) throw std::invalid_argument("aggregate_mean_curve: no traces");
  std::vector<std::uint64_t> grid;
  for (const OptimizationTrace& t : traces) {
    for (const TraceSample& s : t.samples) grid.push_back(s.measurement_count);
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  CurveAccumulator acc(std::move(grid));
  for (const OptimizationTrace& t : traces) acc.add(t);
  return acc.curve();
}

double CdfTable::quantile(double p) const {
  if (points.empty()) throw std::logic_error("cdf: empty table");
  if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("cdf: quantile level must be in (0, 1]");
  for (const CdfPoint& pt : points) {
    if (pt.cumulative_probability >= p) return pt.value;
  }
  return points.back().value;
}

double CdfTable::evaluate(double value) const {
  double f = 0.0;
  for (const CdfPoint& pt : points) {
    if (pt.value > value) break;
    f = pt.cumulative_probability;
  }
  return f;
}

CdfTable empirical_cdf(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("empirical_cdf: no values");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  CdfTable table;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (i + 1 < sorted.size() && sorted[i + 1] == sorted[i]) continue;
    table.points.push_back({sorted[i], static_cast<double>(i + 1) / n});
  }
  return table;
}

std::vector<std::size_t> cdf_sweeps(const ExperimentConfig& config, Algorithm algorithm) {
  std::vector<std::size_t> out;
  if (algorithm == Algorithm::Sequential) {
    for (std::size_t s = 1; s <= config.sweeps; ++s) out.push_back(s);
    return out;
  }
  const std::size_t completed = config.baseline_steps / config.n_elements;
  for (std::size_t s : {std::size_t{1}, std::size_t{10}, std::size_t{50}, completed}) {
    if (s >= 1 && s <= completed && std::find(out.begin(), out.end(), s) == out.end()) out.push_back(s);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::uint64_t measurements_after_sweeps(const ExperimentConfig& config, Algorithm algorithm,
                                        std::size_t sweeps) {
  if (algorithm == Algorithm::Sequential) return 3ULL * config.n_elements * sweeps;
  // one initial probe plus one reading per proposal
  return 1ULL + static_cast<std::uint64_t>(config.n_elements) * sweeps;
}

ExperimentResult run_experiment(const ExperimentConfig& config, unsigned threads) {
  config.validate();
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());

  ExperimentResult result;
  result.config = config;

  const std::vector<std::size_t> seq_sweeps =
      config.runs_sequential() ? cdf_sweeps(config, Algorithm::Sequential) : std::vector<std::size_t>{};
  const std::vector<std::size_t> base_sweeps =
      config.runs_baseline() ? cdf_sweeps(config, Algorithm::RandomBaseline) : std::vector<std::size_t>{};
  std::vector<std::vector<double>> seq_finals(seq_sweeps.size());
  std::vector<std::vector<double>> base_finals(base_sweeps.size());

  std::optional<CurveAccumulator> seq_acc;
  std::optional<CurveAccumulator> base_acc;

  // Trials run in parallel batches; results are folded in trial order so the
  // output does not depend on scheduling.
  const std::size_t batch_size = std::max<std::size_t>(64, 4 * threads);
  std::vector<TrialResult> batch;
  for (std::size_t first = 0; first < config.trials; first += batch_size) {
    const std::size_t count = std::min(batch_size, config.trials - first);
    batch.assign(count, TrialResult{});
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      for (std::size_t i = next++; i < count; i = next++) batch[i] = run_trial(config, first + i);
    };
    const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(threads, count));
    if (workers <= 1) {
      worker();
    } else {
      std::vector<std::jthread> pool;
      for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
    }

    for (const TrialResult& trial : batch) {
      if (trial.sequential) {
        if (!seq_acc) seq_acc.emplace(counts_of(*trial.sequential));
        seq_acc->add(*trial.sequential);
        for (std::size_t k = 0; k < seq_sweeps.size(); ++k) {
          seq_finals[k].push_back(trial.sequential->power_at(
              measurements_after_sweeps(config, Algorithm::Sequential, seq_sweeps[k])));
        }
      }
      if (trial.baseline) {
        if (!base_acc) base_acc.emplace(counts_of(*trial.baseline));
        base_acc->add(*trial.baseline);
        for (std::size_t k = 0; k < base_sweeps.size(); ++k) {
          base_finals[k].push_back(trial.baseline->power_at(
              measurements_after_sweeps(config, Algorithm::RandomBaseline, base_sweeps[k])));
        }
      }
    }
  }

  if (seq_acc) result.sequential_curve = seq_acc->curve();
  if (base_acc) result.baseline_curve = base_acc->curve();
  for (std::size_t k = 0; k < seq_sweeps.size(); ++k) {
    CdfTable table = empirical_cdf(seq_finals[k]);
    result.cdfs.push_back({Algorithm::Sequential, seq_sweeps[k], std::move(seq_finals[k]), std::move(table)});
  }
  for (std::size_t k = 0; k < base_sweeps.size(); ++k) {
    CdfTable table = empirical_cdf(base_finals[k]);
    result.cdfs.push_back(
        {Algorithm::RandomBaseline, base_sweeps[k], std::move(base_finals[k]), std::move(table)});
  }
  return result;
}

const char* to_string(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::Sequential: return "sequential";
    case Algorithm::RandomBaseline: return "random_baseline";
    case Algorithm::Both: return "both";
  }
  return "unknown";
}

const char* to_string(InitPolicy policy) {
  switch (policy) {
    case InitPolicy::Zeros: return "zeros";
    case InitPolicy::UniformRandom: return "uniform_random";
  }
  return "unknown";
}

const char* to_string(SnrReference reference) {
  switch (reference) {
    case SnrReference::Total: return "total";
    case SnrReference::PerElement: return "per_element";
  }
  return "unknown";
}

}  // namespace phasealign
