#pragma once

// Verifiers that share no code path with the optimizer: exhaustive grid
// search and a direct check of phasor alignment.

#include <cstddef>
#include <cstdint>
#include <stdexcept>

#include "phasealign/channel.hpp"

namespace phasealign {

class ResourceLimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Uniform half-open grid {2 pi k / K : k = 0..K-1} per element.
struct GridSpec {
  static constexpr std::uint64_t kDefaultCap = 10'000'000;

  std::size_t points_per_dim;
  std::uint64_t cap = kDefaultCap;
};

struct BruteForceResult {
  double power;
  PhaseVector phases;
};

/// Exhaustive maximum of received_power over the K^N grid. Ties keep the
/// lexicographically smallest grid point. Throws ResourceLimitError when
/// K^N exceeds grid.cap, std::invalid_argument when K < 2.
BruteForceResult brute_force_max(const EffectiveGains& z, const GridSpec& grid);

/// True iff every phasor z_n e^{j theta_n} has the argument of the first one
/// to within tol radians. All gains must be nonzero.
bool check_fixed_point_alignment(const EffectiveGains& z, const PhaseVector& theta, double tol);

}  // namespace phasealign
