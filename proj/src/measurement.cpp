#include "phasealign/measurement.hpp"

#include <cmath>
#include <stdexcept>

namespace phasealign {

double noise_variance_for(const EffectiveGains& z, double snr_db, SnrReference reference) {
  if (std::isnan(snr_db) || snr_db == -INFINITY) {
    throw std::invalid_argument("noise model: snr_db must be a number above -inf");
  }
  double energy = 0.0;
  for (const Complex& v : z) energy += std::norm(v);
  if (reference == SnrReference::PerElement) energy /= static_cast<double>(z.size());
  return energy / std::pow(10.0, snr_db / 10.0);
}

MeasurementOracle::MeasurementOracle(EffectiveGains gains, NoiseModel noise)
    : evaluator_(std::move(gains)), noise_(noise) {
  if (const auto* awgn = std::get_if<AwgnOnSignal>(&noise_)) {
    noise_variance_ = noise_variance_for(evaluator_.gains(), awgn->snr_db, awgn->reference);
    rng_.seed(awgn->seed);
  }
}

double MeasurementOracle::measure(const PhaseVector& theta) {
  const Complex field = evaluator_.field(theta);
  ++count_;
  if (noise_variance_ == 0.0) return std::norm(field);
  const double scale = std::sqrt(noise_variance_ / 2.0);
  const double re = normal_(rng_);
  const double im = normal_(rng_);
  return std::norm(field + scale * Complex{re, im});
}

MeasurementOracle make_noisy_oracle(EffectiveGains z, double snr_db, std::uint64_t seed,
                                    SnrReference reference) {
  return MeasurementOracle(std::move(z), AwgnOnSignal{snr_db, seed, reference});
}

}  // namespace phasealign
