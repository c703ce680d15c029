#include "phasealign/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

namespace phasealign {

namespace {

using Matrix3 = std::array<std::array<double, 3>, 3>;

Matrix3 design_matrix(const std::array<double, 3>& phi) {
  Matrix3 a{};
  for (std::size_t l = 0; l < 3; ++l) a[l] = {1.0, std::cos(phi[l]), std::sin(phi[l])};
  return a;
}

double det3(const Matrix3& a) {
  return a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) -
         a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
         a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
}

double degenerate_threshold(const Readings& y) {
  return 1e-12 * std::max({y[0], y[1], y[2], 1.0});
}

void require_dimension(const MeasurementOracle& oracle, std::size_t n, const PhaseVector& theta) {
  if (n == 0) throw std::invalid_argument("optimizer: n must be at least 1");
  if (theta.size() != n || oracle.dimension() != n) {
    throw std::invalid_argument("optimizer: expected " + std::to_string(n) + " phases, got " +
                                std::to_string(theta.size()) + " (oracle has " +
                                std::to_string(oracle.dimension()) + ")");
  }
}

// Probes element i at the three offsets and moves it to the maximizing phase.
template <typename OnReading>
Readings update_element(MeasurementOracle& oracle, PhaseVector& theta, std::size_t i,
                        const SequentialOptions& options, OnReading&& on_reading) {
  const double base = theta[i];
  Readings y{};
  for (std::size_t l = 0; l < 3; ++l) {
    theta.set(i, base + options.angles[l]);
    y[l] = oracle.measure(theta);
    on_reading(theta, y[l]);
  }
  theta.set(i, base + options.solver(options.angles, y));
  return y;
}

std::vector<std::size_t> ascending_order(std::size_t n) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  return order;
}

}  // namespace

double design_determinant(double phi1, double phi2, double phi3) {
  return det3(design_matrix({phi1, phi2, phi3}));
}

AngleTriple::AngleTriple(double phi1, double phi2, double phi3) {
  if (!std::isfinite(phi1) || !std::isfinite(phi2) || !std::isfinite(phi3)) {
    throw DegenerateAnglesError("angle triple: non-finite angle");
  }
  phi_ = {wrap_phase(phi1), wrap_phase(phi2), wrap_phase(phi3)};
  if (std::abs(determinant()) <= kMinDeterminant) {
    throw DegenerateAnglesError("angle triple: |det(A)| <= 1e-9, probe offsets are not independent");
  }
}

AngleTriple AngleTriple::standard() { return AngleTriple(0.0, kPi / 2.0, kPi); }

double AngleTriple::determinant() const { return det3(design_matrix(phi_)); }

bool AngleTriple::is_standard() const {
  return phi_[0] == 0.0 && phi_[1] == kPi / 2.0 && phi_[2] == kPi;
}

bool SolverCoefficients::consistent(double rel_tol) const {
  if (x1 < 0.0) return false;
  return x1 * x1 >= x2 * x2 + x3 * x3 - rel_tol * x1 * x1;
}

SolverCoefficients solve_coefficients(const AngleTriple& angles, const Readings& y) {
  const Matrix3 a = design_matrix(angles.values());
  const double det = det3(a);
  // inverse = adjugate / det, adjugate = transposed cofactor matrix
  Matrix3 inv{};
  for (std::size_t r = 0; r < 3; ++r) {
    for (std::size_t c = 0; c < 3; ++c) {
      const std::size_t r0 = (c + 1) % 3, r1 = (c + 2) % 3;
      const std::size_t c0 = (r + 1) % 3, c1 = (r + 2) % 3;
      inv[r][c] = (a[r0][c0] * a[r1][c1] - a[r0][c1] * a[r1][c0]) / det;
    }
  }
  std::array<double, 3> x{};
  for (std::size_t r = 0; r < 3; ++r) x[r] = inv[r][0] * y[0] + inv[r][1] * y[1] + inv[r][2] * y[2];
  return {x[0], x[1], x[2]};
}

double solve_three_point(const AngleTriple& angles, double y1, double y2, double y3) {
  const Readings y{y1, y2, y3};
  const SolverCoefficients x = solve_coefficients(angles, y);
  if (std::hypot(x.x2, x.x3) <= degenerate_threshold(y)) return 0.0;
  return wrap_phase(std::atan2(x.x3, x.x2));
}

double closed_form_update(double y1, double y2, double y3) {
  const double re = y1 - y3;
  const double im = 2.0 * y2 - y1 - y3;
  const double eps = degenerate_threshold({y1, y2, y3});
  if (std::abs(re) <= eps && std::abs(im) <= eps) return 0.0;
  return wrap_phase(std::atan2(im, re));
}

double default_element_solver(const AngleTriple& angles, const Readings& y) {
  if (angles.is_standard()) return closed_form_update(y[0], y[1], y[2]);
  return solve_three_point(angles, y[0], y[1], y[2]);
}

double OptimizationTrace::power_at(std::uint64_t count) const {
  if (samples.empty()) throw std::logic_error("optimization trace: no samples");
  auto it = std::upper_bound(samples.begin(), samples.end(), count,
                             [](std::uint64_t c, const TraceSample& s) { return c < s.measurement_count; });
  if (it == samples.begin()) return samples.front().power;
  return std::prev(it)->power;
}

SweepResult sequential_sweep(MeasurementOracle& oracle, PhaseVector theta,
                             std::span<const std::size_t> order, const SequentialOptions& options) {
  const std::size_t n = theta.size();
  require_dimension(oracle, n, theta);
  if (order.size() != n) throw std::invalid_argument("sequential_sweep: order must list every element once");
  std::vector<bool> seen(n, false);
  for (std::size_t i : order) {
    if (i >= n || seen[i]) throw std::invalid_argument("sequential_sweep: order is not a permutation");
    seen[i] = true;
  }

  SweepResult result;
  result.records.reserve(3 * n);
  for (std::size_t i : order) {
    update_element(oracle, theta, i, options, [&](const PhaseVector& probe, double reading) {
      result.records.push_back({oracle.count(), probe, reading});
    });
  }
  result.phases = std::move(theta);
  return result;
}

OptimizationTrace run_sequential(MeasurementOracle& oracle, std::size_t n, std::size_t m,
                                 PhaseVector init, OrderPolicy order, const SequentialOptions& options) {
  require_dimension(oracle, n, init);
  if (m == 0) throw std::invalid_argument("run_sequential: m must be at least 1");
  if (!options.solver) throw std::invalid_argument("run_sequential: no element solver");

  std::vector<std::size_t> visit = ascending_order(n);
  std::optional<std::mt19937_64> shuffle_rng;
  if (const auto* shuffle = std::get_if<SeededShuffle>(&order)) shuffle_rng.emplace(shuffle->seed);

  // The first probe sits at offset 0 when phi1 == 0, so it reads the
  // configuration left by the previous update.
  const bool first_probe_is_current = options.angles[0] == 0.0;
  const std::uint64_t start = oracle.count();

  OptimizationTrace trace;
  trace.samples.reserve(3 * n * m + 1);
  PhaseVector theta = std::move(init);
  trace.samples.push_back({0, oracle.true_power(theta), std::nullopt});

  for (std::size_t sweep = 0; sweep < m; ++sweep) {
    if (shuffle_rng) std::shuffle(visit.begin(), visit.end(), *shuffle_rng);
    for (std::size_t i : visit) {
      const Readings y = update_element(oracle, theta, i, options, [](const PhaseVector&, double) {});
      if (first_probe_is_current) trace.samples.back().reading = y[0];
      trace.samples.push_back({oracle.count() - start, oracle.true_power(theta), std::nullopt});
    }
    ++trace.sweeps_completed;
  }
  trace.final_phases = std::move(theta);
  return trace;
}

OptimizationTrace run_random_baseline(MeasurementOracle& oracle, std::size_t n, std::size_t steps,
                                      std::uint64_t seed, PhaseVector init) {
  require_dimension(oracle, n, init);
  if (steps == 0) throw std::invalid_argument("run_random_baseline: steps must be at least 1");

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uniform(0.0, kTwoPi);
  const std::uint64_t start = oracle.count();

  OptimizationTrace trace;
  trace.samples.reserve(steps + 1);
  PhaseVector theta = std::move(init);
  double incumbent = oracle.measure(theta);
  trace.samples.push_back({oracle.count() - start, oracle.true_power(theta), incumbent});

  for (std::size_t step = 0; step < steps; ++step) {
    const std::size_t i = step % n;
    const double previous = theta[i];
    theta.set(i, uniform(rng));
    const double reading = oracle.measure(theta);
    if (reading > incumbent) {
      incumbent = reading;
    } else {
      theta.set(i, previous);
    }
    trace.samples.push_back({oracle.count() - start, oracle.true_power(theta), incumbent});
  }
  trace.final_phases = std::move(theta);
  trace.sweeps_completed = steps / n;
  return trace;
}

}  // namespace phasealign
