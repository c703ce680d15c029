#include "phasealign/reference.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace phasealign {

BruteForceResult brute_force_max(const EffectiveGains& z, const GridSpec& grid) {
  const std::size_t k = grid.points_per_dim;
  if (k < 2) throw std::invalid_argument("brute_force_max: need at least 2 grid points per element");
  const std::size_t n = z.size();

  std::uint64_t total = 1;
  for (std::size_t i = 0; i < n; ++i) {
    if (total > grid.cap / k) {
      throw ResourceLimitError("brute_force_max: grid of " + std::to_string(k) + "^" +
                               std::to_string(n) + " points exceeds cap " + std::to_string(grid.cap));
    }
    total *= k;
  }

  // phasor[i][m] = z_i e^{j 2 pi m / K}
  std::vector<std::vector<Complex>> phasor(n, std::vector<Complex>(k));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t m = 0; m < k; ++m) {
      phasor[i][m] = z[i] * std::polar(1.0, kTwoPi * static_cast<double>(m) / static_cast<double>(k));
    }
  }

  std::vector<std::size_t> index(n, 0);
  std::vector<std::size_t> best_index(n, 0);
  double best = -1.0;
  for (std::uint64_t visited = 0; visited < total; ++visited) {
    Complex sum{0.0, 0.0};
    for (std::size_t i = 0; i < n; ++i) sum += phasor[i][index[i]];
    const double power = std::norm(sum);
    if (power > best) {
      best = power;
      best_index = index;
    }
    // odometer increment, last element fastest, so visiting order is lexicographic
    for (std::size_t i = n; i-- > 0;) {
      if (++index[i] < k) break;
      index[i] = 0;
    }
  }

  std::vector<double> phases(n);
  for (std::size_t i = 0; i < n; ++i) {
    phases[i] = kTwoPi * static_cast<double>(best_index[i]) / static_cast<double>(k);
  }
  return {best, PhaseVector(std::move(phases))};
}

bool check_fixed_point_alignment(const EffectiveGains& z, const PhaseVector& theta, double tol) {
  if (z.size() != theta.size()) throw std::invalid_argument("check_fixed_point_alignment: dimension mismatch");
  for (const Complex& v : z) {
    if (v == Complex{0.0, 0.0}) throw std::invalid_argument("check_fixed_point_alignment: zero gain entry");
  }
  const double reference = principal_arg(z[0] * std::polar(1.0, theta[0]));
  for (std::size_t i = 1; i < z.size(); ++i) {
    const double arg = principal_arg(z[i] * std::polar(1.0, theta[i]));
    if (std::abs(wrap_signed(arg - reference)) > tol) return false;
  }
  return true;
}

}  // namespace phasealign
