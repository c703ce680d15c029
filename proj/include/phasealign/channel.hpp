#pragma once

// Effective per-element gains, phase vectors and the received-power model
// |sum_n z_n e^{j theta_n}|^2 for a passive phase-shifting surface.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <optional>
#include <span>
#include <vector>

namespace phasealign {

using Complex = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Wraps an angle into the canonical interval [0, 2pi).
double wrap_phase(double angle);

/// Wraps an angle into (-pi, pi], the range of the principal argument.
double wrap_signed(double angle);

/// Smallest absolute difference between two angles, modulo 2pi.
double angular_distance(double a, double b);

/// Principal argument in (-pi, pi].
double principal_arg(Complex z);

/// Ordered list of complex effective gains z_1..z_N. Never empty, always finite.
class EffectiveGains {
 public:
  explicit EffectiveGains(std::vector<Complex> gains);
  EffectiveGains(std::initializer_list<Complex> gains);

  std::size_t size() const { return gains_.size(); }
  const Complex& operator[](std::size_t i) const { return gains_[i]; }
  std::span<const Complex> values() const { return gains_; }
  auto begin() const { return gains_.begin(); }
  auto end() const { return gains_.end(); }

  bool operator==(const EffectiveGains&) const = default;

 private:
  std::vector<Complex> gains_;
};

/// Adjustable phase shifts, each stored wrapped into [0, 2pi).
class PhaseVector {
 public:
  PhaseVector() = default;
  explicit PhaseVector(std::vector<double> phases);
  PhaseVector(std::initializer_list<double> phases);

  static PhaseVector zeros(std::size_t n);

  std::size_t size() const { return phases_.size(); }
  double operator[](std::size_t i) const { return phases_[i]; }
  std::span<const double> values() const { return phases_; }

  /// Sets entry i to wrap_phase(angle).
  void set(std::size_t i, double angle);

  /// Adds delta to every entry.
  PhaseVector rotated(double delta) const;

  bool operator==(const PhaseVector&) const = default;

 private:
  std::vector<double> phases_;
};

enum class HarvestingMode { Direct, Indirect };

/// n i.i.d. draws from CN(0, 1); deterministic in seed.
EffectiveGains generate_channels(std::size_t n, std::uint64_t seed);

/// Direct: z_n = p_t h_n. Indirect: z_n = p_t h_n g_n.
EffectiveGains compose_effective_gains(HarvestingMode mode, double p_t,
                                       const EffectiveGains& h,
                                       const std::optional<EffectiveGains>& g = std::nullopt);

double received_power(const EffectiveGains& z, const PhaseVector& theta);

/// (sum_n |z_n|)^2, the largest value received_power can take.
double optimal_power_bound(const EffectiveGains& z);

/// theta_n = theta0 - Arg(z_n), wrapped. Zero gains get phase 0.
PhaseVector optimal_phases(const EffectiveGains& z, double theta0 = 0.0);

/// Evaluates received_power with a per-element cache of z_n e^{j theta_n}.
///
/// Successive evaluations that differ in a few entries only pay for the
/// changed phasors. Results are bit-identical to received_power because the
/// per-element terms and the summation order are the same.
class PowerEvaluator {
 public:
  explicit PowerEvaluator(EffectiveGains gains);

  const EffectiveGains& gains() const { return gains_; }
  std::size_t size() const { return gains_.size(); }

  /// Complex field sum_n z_n e^{j theta_n}.
  Complex field(const PhaseVector& theta);
  double power(const PhaseVector& theta) { return std::norm(field(theta)); }

 private:
  EffectiveGains gains_;
  std::vector<double> cached_phases_;
  std::vector<Complex> cached_terms_;
  bool primed_ = false;
};

}  // namespace phasealign
