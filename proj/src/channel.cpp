#include "phasealign/channel.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

namespace phasealign {

double wrap_phase(double angle) {
  double r = std::fmod(angle, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  // fmod of a tiny negative value plus 2pi can round up to exactly 2pi.
  if (r >= kTwoPi) r = 0.0;
  return r;
}

double wrap_signed(double angle) {
  double r = wrap_phase(angle);
  if (r > kPi) r -= kTwoPi;
  return r;
}

double angular_distance(double a, double b) { return std::abs(wrap_signed(a - b)); }

double principal_arg(Complex z) {
  double a = std::arg(z);
  // atan2 yields -pi for (-x, -0.0); the principal argument uses +pi there.
  if (a <= -kPi) a = kPi;
  return a;
}

namespace {

std::vector<Complex> checked_gains(std::vector<Complex> gains) {
  if (gains.empty()) throw std::invalid_argument("effective gains: need at least one element");
  for (std::size_t i = 0; i < gains.size(); ++i) {
    if (!std::isfinite(gains[i].real()) || !std::isfinite(gains[i].imag())) {
      throw std::invalid_argument("effective gains: entry " + std::to_string(i) + " is not finite");
    }
  }
  return gains;
}

std::vector<double> wrapped(std::vector<double> phases) {
  for (std::size_t i = 0; i < phases.size(); ++i) {
    if (!std::isfinite(phases[i])) {
      throw std::invalid_argument("phase vector: entry " + std::to_string(i) + " is not finite");
    }
    phases[i] = wrap_phase(phases[i]);
  }
  return phases;
}

void require_same_size(const EffectiveGains& z, const PhaseVector& theta) {
  if (z.size() != theta.size()) {
    throw std::invalid_argument("dimension mismatch: " + std::to_string(z.size()) + " gains vs " +
                                std::to_string(theta.size()) + " phases");
  }
}

}  // namespace

EffectiveGains::EffectiveGains(std::vector<Complex> gains) : gains_(checked_gains(std::move(gains))) {}

EffectiveGains::EffectiveGains(std::initializer_list<Complex> gains)
    : EffectiveGains(std::vector<Complex>(gains)) {}

PhaseVector::PhaseVector(std::vector<double> phases) : phases_(wrapped(std::move(phases))) {}

PhaseVector::PhaseVector(std::initializer_list<double> phases)
    : PhaseVector(std::vector<double>(phases)) {}

PhaseVector PhaseVector::zeros(std::size_t n) { return PhaseVector(std::vector<double>(n, 0.0)); }

void PhaseVector::set(std::size_t i, double angle) {
  if (!std::isfinite(angle)) throw std::invalid_argument("phase vector: non-finite angle");
  phases_.at(i) = wrap_phase(angle);
}

PhaseVector PhaseVector::rotated(double delta) const {
  std::vector<double> out(phases_);
  for (double& p : out) p += delta;
  return PhaseVector(std::move(out));
}

EffectiveGains generate_channels(std::size_t n, std::uint64_t seed) {
  if (n == 0) throw std::invalid_argument("generate_channels: n must be at least 1");
  std::mt19937_64 rng(seed);
  // Each quadrature carries half of the unit variance.
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  std::vector<Complex> gains;
  gains.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double re = normal(rng);
    const double im = normal(rng);
    gains.emplace_back(re, im);
  }
  return EffectiveGains(std::move(gains));
}

EffectiveGains compose_effective_gains(HarvestingMode mode, double p_t, const EffectiveGains& h,
                                       const std::optional<EffectiveGains>& g) {
  if (!(p_t > 0.0) || !std::isfinite(p_t)) {
    throw std::invalid_argument("compose_effective_gains: transmit power must be positive and finite");
  }
  std::vector<Complex> out(h.begin(), h.end());
  if (mode == HarvestingMode::Indirect) {
    if (!g) throw std::invalid_argument("compose_effective_gains: indirect mode requires g");
    if (g->size() != h.size()) {
      throw std::invalid_argument("compose_effective_gains: g has " + std::to_string(g->size()) +
                                  " entries, h has " + std::to_string(h.size()));
    }
    for (std::size_t i = 0; i < out.size(); ++i) out[i] *= (*g)[i];
  }
  for (Complex& v : out) v *= p_t;
  return EffectiveGains(std::move(out));
}

double received_power(const EffectiveGains& z, const PhaseVector& theta) {
  require_same_size(z, theta);
  Complex sum{0.0, 0.0};
  for (std::size_t i = 0; i < z.size(); ++i) sum += z[i] * std::polar(1.0, theta[i]);
  return std::norm(sum);
}

double optimal_power_bound(const EffectiveGains& z) {
  double total = 0.0;
  for (const Complex& v : z) total += std::abs(v);
  return total * total;
}

PhaseVector optimal_phases(const EffectiveGains& z, double theta0) {
  std::vector<double> out(z.size(), 0.0);
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (z[i] != Complex{0.0, 0.0}) out[i] = theta0 - principal_arg(z[i]);
  }
  return PhaseVector(std::move(out));
}

PowerEvaluator::PowerEvaluator(EffectiveGains gains)
    : gains_(std::move(gains)), cached_phases_(gains_.size()), cached_terms_(gains_.size()) {}

Complex PowerEvaluator::field(const PhaseVector& theta) {
  require_same_size(gains_, theta);
  Complex sum{0.0, 0.0};
  for (std::size_t i = 0; i < gains_.size(); ++i) {
    if (!primed_ || cached_phases_[i] != theta[i]) {
      cached_phases_[i] = theta[i];
      cached_terms_[i] = gains_[i] * std::polar(1.0, theta[i]);
    }
    sum += cached_terms_[i];
  }
  primed_ = true;
  return sum;
}

}  // namespace phasealign
