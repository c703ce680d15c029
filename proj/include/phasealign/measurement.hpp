#pragma once

#include <cstdint>
#include <random>
#include <variant>

#include "phasealign/channel.hpp"

namespace phasealign {

struct Noiseless {};

/// Signal power the SNR is quoted against. Total uses sum_n |z_n|^2,
/// PerElement the mean per-element power sum_n |z_n|^2 / N. Both are
/// independent of the phase configuration.
enum class SnrReference { Total, PerElement };

/// Complex Gaussian noise added to the combined field before square-law
/// detection.
struct AwgnOnSignal {
  double snr_db;
  std::uint64_t seed;
  SnrReference reference = SnrReference::Total;
};

using NoiseModel = std::variant<Noiseless, AwgnOnSignal>;

struct MeasurementRecord {
  std::uint64_t index;  // oracle count right after the call
  PhaseVector phases;
  double reading;
};

/// sigma^2 = P_ref / 10^{snr_db/10}, P_ref = sum_n |z_n|^2 for Total and
/// sum_n |z_n|^2 / N for PerElement. +inf dB gives 0.
double noise_variance_for(const EffectiveGains& z, double snr_db,
                          SnrReference reference = SnrReference::Total);

/// Power meter over hidden gains. Every measure() call costs one measurement.
class MeasurementOracle {
 public:
  explicit MeasurementOracle(EffectiveGains gains, NoiseModel noise = Noiseless{});

  double measure(const PhaseVector& theta);

  std::uint64_t count() const { return count_; }
  std::size_t dimension() const { return evaluator_.size(); }
  double noise_variance() const { return noise_variance_; }
  const NoiseModel& noise_model() const { return noise_; }

  /// Noise-free objective for simulator bookkeeping. Does not touch the
  /// counter and is not available to a real device.
  double true_power(const PhaseVector& theta) { return evaluator_.power(theta); }

 private:
  PowerEvaluator evaluator_;
  NoiseModel noise_;
  double noise_variance_ = 0.0;
  std::mt19937_64 rng_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uint64_t count_ = 0;
};

MeasurementOracle make_noisy_oracle(EffectiveGains z, double snr_db, std::uint64_t seed,
                                    SnrReference reference = SnrReference::Total);

}  // namespace phasealign
