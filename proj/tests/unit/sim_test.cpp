#include <cmath>
#include <set>

#include <gtest/gtest.h>

#include "phasealign/sim.hpp"

namespace phasealign {
namespace {

ExperimentConfig small_config() {
  ExperimentConfig c;
  c.n_elements = 16;
  c.sweeps = 3;
  c.trials = 40;
  c.baseline_steps = 400;
  c.master_seed = 99;
  return c;
}

OptimizationTrace trace_of(std::vector<std::pair<std::uint64_t, double>> points) {
  OptimizationTrace t;
  for (auto [count, power] : points) t.samples.push_back({count, power, std::nullopt});
  return t;
}

TEST(DeriveSeed, StreamsAndTrialsDiffer) {
  std::set<std::uint64_t> seen;
  for (std::uint64_t trial = 0; trial < 100; ++trial) {
    for (Stream s : {Stream::Channel, Stream::Init, Stream::SequentialNoise, Stream::BaselineNoise,
                     Stream::BaselineProposals}) {
      seen.insert(derive_seed(7, trial, s));
    }
  }
  EXPECT_EQ(seen.size(), 500u);
  EXPECT_EQ(derive_seed(7, 3, Stream::Channel), derive_seed(7, 3, Stream::Channel));
  EXPECT_NE(derive_seed(7, 3, Stream::Channel), derive_seed(8, 3, Stream::Channel));
}

TEST(SplitMix64, KnownValue) {
  // first output of the reference generator seeded with 0
  EXPECT_EQ(splitmix64(0), 0xE220A8397B1DCDAFULL);
}

TEST(RunTrial, SingleElementIsOptimalThroughout) {
  ExperimentConfig c = small_config();
  c.n_elements = 1;
  const TrialResult r = run_trial(c, 0);
  ASSERT_TRUE(r.sequential && r.baseline);
  for (const TraceSample& s : r.sequential->samples) EXPECT_NEAR(s.power, 1.0, 1e-12);
  for (const TraceSample& s : r.baseline->samples) EXPECT_NEAR(s.power, 1.0, 1e-12);
}

TEST(RunTrial, DeterministicAndIndexed) {
  ExperimentConfig c = small_config();
  c.snr_db = 5.0;
  const TrialResult a = run_trial(c, 7);
  const TrialResult b = run_trial(c, 7);
  EXPECT_EQ(a.optimum, b.optimum);
  EXPECT_EQ(a.sequential->final_phases, b.sequential->final_phases);
  EXPECT_EQ(a.baseline->final_phases, b.baseline->final_phases);
  EXPECT_NE(run_trial(c, 8).optimum, a.optimum);
  EXPECT_THROW(run_trial(c, c.trials), std::invalid_argument);
}

TEST(RunTrial, NormalizedPowerNeverExceedsOne) {
  ExperimentConfig c = small_config();
  c.init_policy = InitPolicy::UniformRandom;
  for (std::size_t i = 0; i < c.trials; ++i) {
    const TrialResult r = run_trial(c, i);
    for (const TraceSample& s : r.sequential->samples) ASSERT_LE(s.power, 1.0 + 1e-9);
    for (const TraceSample& s : r.baseline->samples) ASSERT_LE(s.power, 1.0 + 1e-9);
  }
}

TEST(RunTrial, AlgorithmSelection) {
  ExperimentConfig c = small_config();
  c.algorithm = Algorithm::Sequential;
  EXPECT_FALSE(run_trial(c, 0).baseline.has_value());
  c.algorithm = Algorithm::RandomBaseline;
  EXPECT_FALSE(run_trial(c, 0).sequential.has_value());
}

TEST(AggregateMeanCurve, AveragesOnUnionGrid) {
  const std::vector<OptimizationTrace> traces{trace_of({{0, 0.2}, {3, 0.6}}), trace_of({{0, 0.4}, {3, 1.0}})};
  const AggregateCurve curve = aggregate_mean_curve(traces);
  ASSERT_EQ(curve.points.size(), 2u);
  EXPECT_NEAR(curve.points[0].mean_normalized_power, 0.3, 1e-15);
  EXPECT_NEAR(curve.points[1].mean_normalized_power, 0.8, 1e-15);
  EXPECT_NEAR(curve.points[0].std_error, std::sqrt(0.02 / 2.0), 1e-15);
  EXPECT_THROW(aggregate_mean_curve(std::vector<OptimizationTrace>{}), std::invalid_argument);
}

TEST(AggregateMeanCurve, CarriesLastValueForward) {
  const std::vector<OptimizationTrace> traces{trace_of({{0, 0.0}, {4, 1.0}}), trace_of({{0, 0.0}, {2, 0.5}})};
  const AggregateCurve curve = aggregate_mean_curve(traces);
  ASSERT_EQ(curve.points.size(), 3u);
  EXPECT_EQ(curve.points[1].measurement_count, 2u);
  EXPECT_NEAR(curve.points[1].mean_normalized_power, 0.25, 1e-15);
  EXPECT_NEAR(curve.points[2].mean_normalized_power, 0.75, 1e-15);
  EXPECT_NEAR(curve.mean_at(3), 0.25, 1e-15);
  EXPECT_NEAR(curve.mean_at(1000), 0.75, 1e-15);
  EXPECT_EQ(curve.first_reaching(0.5), std::optional<std::uint64_t>(4));
  EXPECT_FALSE(curve.first_reaching(0.9).has_value());
}

TEST(CurveAccumulator, RejectsBadGrid) {
  EXPECT_THROW(CurveAccumulator({}), std::invalid_argument);
  EXPECT_THROW(CurveAccumulator({3, 3}), std::invalid_argument);
  EXPECT_THROW(CurveAccumulator({3, 1}), std::invalid_argument);
}

TEST(EmpiricalCdf, Examples) {
  const std::vector<double> v{0.5, 0.9, 0.7};
  const CdfTable t = empirical_cdf(v);
  ASSERT_EQ(t.points.size(), 3u);
  EXPECT_EQ(t.points[0].value, 0.5);
  EXPECT_NEAR(t.points[0].cumulative_probability, 1.0 / 3.0, 1e-15);
  EXPECT_EQ(t.points[2].value, 0.9);
  EXPECT_EQ(t.points[2].cumulative_probability, 1.0);
  EXPECT_EQ(t.evaluate(0.4), 0.0);
  EXPECT_NEAR(t.evaluate(0.8), 2.0 / 3.0, 1e-15);
  EXPECT_EQ(t.quantile(0.5), 0.7);
  EXPECT_EQ(t.quantile(1.0), 0.9);
  EXPECT_THROW(t.quantile(0.0), std::invalid_argument);
  EXPECT_THROW(empirical_cdf(std::vector<double>{}), std::invalid_argument);
}

TEST(EmpiricalCdf, CollapsesTies) {
  const CdfTable t = empirical_cdf(std::vector<double>{1.0, 1.0, 0.5, 1.0});
  ASSERT_EQ(t.points.size(), 2u);
  EXPECT_EQ(t.points[0].cumulative_probability, 0.25);
  EXPECT_EQ(t.points[1].cumulative_probability, 1.0);
}

TEST(CdfSweeps, Sets) {
  ExperimentConfig c;
  EXPECT_EQ(cdf_sweeps(c, Algorithm::Sequential), (std::vector<std::size_t>{1, 2, 3, 4, 5}));
  EXPECT_EQ(cdf_sweeps(c, Algorithm::RandomBaseline), (std::vector<std::size_t>{1, 10, 30}));
  c.baseline_steps = 50;
  EXPECT_TRUE(cdf_sweeps(c, Algorithm::RandomBaseline).empty());
  EXPECT_EQ(measurements_after_sweeps(c, Algorithm::Sequential, 1), 300u);
  EXPECT_EQ(measurements_after_sweeps(c, Algorithm::RandomBaseline, 2), 201u);
}

TEST(ExperimentConfig, ValidationNamesField) {
  const auto field_of = [](ExperimentConfig c) -> std::string {
    try {
      c.validate();
    } catch (const ConfigError& e) {
      return e.field();
    }
    return "";
  };
  ExperimentConfig c;
  EXPECT_EQ(field_of(c), "");
  c.n_elements = 0;
  EXPECT_EQ(field_of(c), "n_elements");
  c = {};
  c.sweeps = 0;
  EXPECT_EQ(field_of(c), "sweeps");
  c = {};
  c.trials = 0;
  EXPECT_EQ(field_of(c), "trials");
  c = {};
  c.baseline_steps = 0;
  EXPECT_EQ(field_of(c), "baseline_steps");
  c = {};
  c.snr_db = NAN;
  EXPECT_EQ(field_of(c), "snr_db");
}

TEST(RunExperiment, IndependentOfThreadCount) {
  ExperimentConfig c = small_config();
  c.trials = 150;
  c.snr_db = 10.0;
  const ExperimentResult one = run_experiment(c, 1);
  const ExperimentResult four = run_experiment(c, 4);
  ASSERT_EQ(one.sequential_curve->points.size(), four.sequential_curve->points.size());
  for (std::size_t k = 0; k < one.sequential_curve->points.size(); ++k) {
    EXPECT_EQ(one.sequential_curve->points[k].mean_normalized_power,
              four.sequential_curve->points[k].mean_normalized_power);
    EXPECT_EQ(one.sequential_curve->points[k].std_error, four.sequential_curve->points[k].std_error);
  }
  for (std::size_t k = 0; k < one.baseline_curve->points.size(); ++k) {
    EXPECT_EQ(one.baseline_curve->points[k].mean_normalized_power,
              four.baseline_curve->points[k].mean_normalized_power);
  }
  ASSERT_EQ(one.cdfs.size(), four.cdfs.size());
  for (std::size_t k = 0; k < one.cdfs.size(); ++k) EXPECT_EQ(one.cdfs[k].final_values, four.cdfs[k].final_values);
}

TEST(RunExperiment, SequentialPlateausAndDominatesBaseline) {
  ExperimentConfig c;
  c.trials = 200;
  c.sweeps = 5;
  const ExperimentResult r = run_experiment(c);
  const double at_one_sweep = r.sequential_curve->mean_at(300);
  EXPECT_GE(at_one_sweep, 0.95);
  EXPECT_LE(r.sequential_curve->mean_at(1500) - at_one_sweep, 0.02);
  EXPECT_GE(r.sequential_curve->mean_at(1500), 1.0 - 1e-6);

  // sequential after one sweep vs baseline after one sweep of proposals
  const CdfSeries* seq = nullptr;
  const CdfSeries* base = nullptr;
  for (const CdfSeries& s : r.cdfs) {
    if (s.sweeps != 1) continue;
    (s.algorithm == Algorithm::Sequential ? seq : base) = &s;
  }
  ASSERT_TRUE(seq && base);
  for (double p = 0.05; p <= 0.951; p += 0.05) {
    EXPECT_GE(seq->table.quantile(p), base->table.quantile(p)) << "p = " << p;
  }

  // ten sweeps of baseline proposals land near one sequential sweep
  EXPECT_NEAR(r.baseline_curve->mean_at(3001), at_one_sweep, 0.05);
}

TEST(ToString, Names) {
  EXPECT_STREQ(to_string(Algorithm::RandomBaseline), "random_baseline");
  EXPECT_STREQ(to_string(InitPolicy::UniformRandom), "uniform_random");
  EXPECT_STREQ(to_string(SnrReference::PerElement), "per_element");
}

}  // namespace
}  // namespace phasealign
