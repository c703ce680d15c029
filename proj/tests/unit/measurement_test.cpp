#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "phasealign/measurement.hpp"

namespace phasealign {
namespace {

TEST(MeasurementOracle, NoiselessReadingAndCounter) {
  MeasurementOracle oracle(EffectiveGains{1.0, 1.0});
  EXPECT_EQ(oracle.count(), 0u);
  EXPECT_DOUBLE_EQ(oracle.measure(PhaseVector{0.0, 0.0}), 4.0);
  EXPECT_EQ(oracle.count(), 1u);
}

TEST(MeasurementOracle, DimensionMismatchLeavesCounterAlone) {
  MeasurementOracle oracle(EffectiveGains{1.0});
  EXPECT_THROW(oracle.measure(PhaseVector{0.0, 0.0}), std::invalid_argument);
  EXPECT_EQ(oracle.count(), 0u);
}

TEST(MeasurementOracle, CounterCountsEveryCall) {
  MeasurementOracle oracle(generate_channels(5, 3), AwgnOnSignal{10.0, 4});
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, kTwoPi);
  for (std::uint64_t k = 1; k <= 257; ++k) {
    oracle.measure(PhaseVector{u(rng), u(rng), u(rng), u(rng), u(rng)});
    ASSERT_EQ(oracle.count(), k);
  }
}

TEST(MeasurementOracle, NoiselessEqualsReceivedPowerExactly) {
  const EffectiveGains z = generate_channels(30, 11);
  MeasurementOracle oracle(z);
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(0.0, kTwoPi);
  for (int i = 0; i < 100; ++i) {
    std::vector<double> p(30);
    for (double& v : p) v = u(rng);
    const PhaseVector theta(p);
    EXPECT_EQ(oracle.measure(theta), received_power(z, theta));
  }
}

TEST(MeasurementOracle, InfiniteSnrBehavesLikeNoiseless) {
  const EffectiveGains z = generate_channels(8, 21);
  MeasurementOracle clean(z);
  MeasurementOracle inf_snr = make_noisy_oracle(z, INFINITY, 5);
  EXPECT_EQ(inf_snr.noise_variance(), 0.0);
  std::mt19937_64 rng(22);
  std::uniform_real_distribution<double> u(0.0, kTwoPi);
  for (int i = 0; i < 50; ++i) {
    std::vector<double> p(8);
    for (double& v : p) v = u(rng);
    const PhaseVector theta(p);
    EXPECT_EQ(inf_snr.measure(theta), clean.measure(theta));
  }
}

TEST(NoiseVariance, TotalReferenceExamples) {
  EXPECT_DOUBLE_EQ(make_noisy_oracle(EffectiveGains{1.0}, 0.0, 1).noise_variance(), 1.0);
  // sum |z_n|^2 = 100
  EXPECT_NEAR(make_noisy_oracle(EffectiveGains{10.0}, 10.0, 1).noise_variance(), 10.0, 1e-12);
  EXPECT_NEAR(make_noisy_oracle(EffectiveGains{5.0, 5.0, 5.0, 5.0}, 10.0, 1).noise_variance(), 10.0, 1e-12);
  EXPECT_EQ(noise_variance_for(EffectiveGains{3.0}, INFINITY), 0.0);
}

TEST(NoiseVariance, PerElementReferenceDividesByCount) {
  const EffectiveGains z{5.0, 5.0, 5.0, 5.0};
  EXPECT_NEAR(noise_variance_for(z, 10.0, SnrReference::PerElement), 2.5, 1e-12);
  EXPECT_DOUBLE_EQ(noise_variance_for(EffectiveGains{1.0}, 0.0, SnrReference::PerElement), 1.0);
  EXPECT_THROW(noise_variance_for(z, NAN), std::invalid_argument);
}

TEST(MeasurementOracle, NoisyMeanIsSignalPlusNoisePower) {
  const EffectiveGains z = generate_channels(10, 31);
  const PhaseVector theta = PhaseVector::zeros(10);
  MeasurementOracle oracle = make_noisy_oracle(z, 3.0, 32);
  const double f = received_power(z, theta);
  const double sigma2 = oracle.noise_variance();

  constexpr int kDraws = 100'000;
  double sum = 0.0, sum_sq = 0.0;
  for (int i = 0; i < kDraws; ++i) {
    const double r = oracle.measure(theta);
    ASSERT_GE(r, 0.0);
    sum += r;
    sum_sq += r * r;
  }
  const double mean = sum / kDraws;
  const double var = (sum_sq - kDraws * mean * mean) / (kDraws - 1);
  const double se = std::sqrt(var / kDraws);
  EXPECT_NEAR(mean, f + sigma2, 3.0 * se);
}

TEST(MeasurementOracle, NoiseIsFreshPerCallAndSeeded) {
  const EffectiveGains z = generate_channels(4, 41);
  const PhaseVector theta = PhaseVector::zeros(4);
  MeasurementOracle a = make_noisy_oracle(z, 10.0, 42);
  MeasurementOracle b = make_noisy_oracle(z, 10.0, 42);
  const double a1 = a.measure(theta);
  const double a2 = a.measure(theta);
  EXPECT_NE(a1, a2);
  EXPECT_EQ(b.measure(theta), a1);
  EXPECT_EQ(b.measure(theta), a2);
}

TEST(MeasurementOracle, TruePowerDoesNotCount) {
  const EffectiveGains z = generate_channels(4, 51);
  MeasurementOracle oracle = make_noisy_oracle(z, 0.0, 52);
  const PhaseVector theta{0.1, 0.2, 0.3, 0.4};
  EXPECT_EQ(oracle.true_power(theta), received_power(z, theta));
  EXPECT_EQ(oracle.count(), 0u);
}

}  // namespace
}  // namespace phasealign
