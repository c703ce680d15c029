#pragma once

// Amplitude-only phase alignment.
//
// For one element with the rest held fixed the reading is a sinusoid in the
// element's phase offset phi:
//
//   f(phi) = |w + z e^{j phi}|^2 = x1 + x2 cos(phi) + x3 sin(phi),
//   x = (|w|^2 + |z|^2, 2 Re(w z*), 2 Im(w z*)),
//
// so three readings at distinct offsets determine x, and the maximizing
// offset is Arg(x2 + j x3). Sweeping this update over all elements never
// decreases the received power.

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <variant>
#include <vector>

#include "phasealign/channel.hpp"
#include "phasealign/measurement.hpp"

namespace phasealign {

class DegenerateAnglesError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Probe offsets (phi1, phi2, phi3) whose design matrix rows
/// [1, cos(phi_l), sin(phi_l)] are linearly independent.
class AngleTriple {
 public:
  static constexpr double kMinDeterminant = 1e-9;

  /// Throws DegenerateAnglesError when |det(A)| <= kMinDeterminant.
  AngleTriple(double phi1, double phi2, double phi3);

  /// (0, pi/2, pi): the triple with the closed-form update.
  static AngleTriple standard();

  double operator[](std::size_t l) const { return phi_[l]; }
  const std::array<double, 3>& values() const { return phi_; }
  double determinant() const;
  bool is_standard() const;

  bool operator==(const AngleTriple&) const = default;

 private:
  std::array<double, 3> phi_;
};

/// Determinant of the design matrix for arbitrary offsets; no validation.
double design_determinant(double phi1, double phi2, double phi3);

struct SolverCoefficients {
  double x1;  // |w|^2 + |z|^2
  double x2;  // 2 Re(w z*)
  double x3;  // 2 Im(w z*)

  /// x1 >= 0 and x1^2 >= x2^2 + x3^2 up to rel_tol * x1^2. Noisy readings
  /// can violate this.
  bool consistent(double rel_tol = 1e-6) const;
};

using Readings = std::array<double, 3>;

/// Solves A x = y with explicit cofactors.
SolverCoefficients solve_coefficients(const AngleTriple& angles, const Readings& y);

/// Maximizing offset Arg(x2 + j x3) in [0, 2pi), or 0 when (x2, x3) is
/// below 1e-12 * max(y1, y2, y3, 1).
double solve_three_point(const AngleTriple& angles, double y1, double y2, double y3);

/// solve_three_point specialised to (0, pi/2, pi):
/// Arg((y1 - y3) + j (2 y2 - y1 - y3)).
double closed_form_update(double y1, double y2, double y3);

/// Maps probe offsets and their readings to the phase increment for one element.
using ElementSolver = std::function<double(const AngleTriple&, const Readings&)>;

/// closed_form_update for the standard triple, solve_three_point otherwise.
double default_element_solver(const AngleTriple& angles, const Readings& y);

struct Ascending {};
struct SeededShuffle {
  std::uint64_t seed;
};
using OrderPolicy = std::variant<Ascending, SeededShuffle>;

struct SequentialOptions {
  AngleTriple angles = AngleTriple::standard();
  ElementSolver solver = default_element_solver;
};

struct TraceSample {
  std::uint64_t measurement_count;
  double power;                   // true objective at this point
  std::optional<double> reading;  // oracle reading of the same configuration, when one was taken
};

struct OptimizationTrace {
  std::vector<TraceSample> samples;
  PhaseVector final_phases;
  std::size_t sweeps_completed = 0;

  /// Power of the last sample with measurement_count <= count; the first
  /// sample's power when count precedes it.
  double power_at(std::uint64_t count) const;
  double final_power() const { return samples.back().power; }
};

struct SweepResult {
  PhaseVector phases;
  std::vector<MeasurementRecord> records;
};

/// One pass of single-element updates in the given (0-based) order.
/// Takes exactly 3 readings per element.
SweepResult sequential_sweep(MeasurementOracle& oracle, PhaseVector theta,
                             std::span<const std::size_t> order,
                             const SequentialOptions& options = {});

/// m full sweeps from init. The trace starts with the initial configuration
/// at count 0 and adds one sample per element update.
OptimizationTrace run_sequential(MeasurementOracle& oracle, std::size_t n, std::size_t m,
                                 PhaseVector init, OrderPolicy order = Ascending{},
                                 const SequentialOptions& options = {});

/// Round-robin random search: propose a uniform phase for one element,
/// keep it only if the reading beats the incumbent reading.
/// Uses steps + 1 measurements (one initial probe).
OptimizationTrace run_random_baseline(MeasurementOracle& oracle, std::size_t n,
                                      std::size_t steps, std::uint64_t seed,
                                      PhaseVector init);

}  // namespace phasealign
