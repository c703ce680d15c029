#pragma once

// Randomized cross-checks of the optimizer against the reference oracles.
// Each check returns a report rather than throwing so that callers can
// print a table of results.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "phasealign/optimizer.hpp"

namespace phasealign {

struct CheckReport {
  std::string name;
  std::size_t cases = 0;
  std::size_t failed_cases = 0;
  std::vector<std::string> failures;  // first few failure descriptions
  double worst = 0.0;                 // largest observed error, check-specific units

  bool passed() const { return failed_cases == 0 && cases > 0; }
  void fail(std::string what);
};

using ClosedFormUpdate = std::function<double(double, double, double)>;

/// Element solver that uses `closed_form` for the standard triple and the
/// general three-point solve otherwise.
ElementSolver solver_from(ClosedFormUpdate closed_form);

/// For random (z0, z) pairs: closed_form matches solve_three_point on
/// (0, pi/2, pi) within closed_form_tol, and solve_three_point recovers
/// Arg(z0 z*) within recovery_tol for the standard triple plus
/// `random_triples` random nondegenerate triples.
CheckReport check_solver_equivalence(std::size_t pairs, std::size_t random_triples, std::uint64_t seed,
                                     const ClosedFormUpdate& closed_form, double closed_form_tol = 1e-12,
                                     double recovery_tol = 1e-9);

/// Grid maximum never exceeds the analytic bound; for N = 2 the gap to the
/// bound does not grow from K = 8 to 32 to 128.
CheckReport check_oracle_sandwich(std::size_t max_n, std::size_t instances, std::uint64_t seed);

/// Sequential result after `sweeps` sweeps is at least the K-point grid
/// maximum (relative slack 1e-6) and both sit below the analytic bound.
CheckReport check_cross_validation(std::size_t max_n, std::size_t instances, std::uint64_t seed,
                                   const ElementSolver& solver, std::size_t grid_points = 64,
                                   std::size_t sweeps = 5);

/// No single-element update lowers the objective by more than 1e-9 relative.
CheckReport check_monotonicity(std::size_t min_n, std::size_t max_n, std::size_t instances,
                               std::size_t sweeps, std::uint64_t seed, const ElementSolver& solver);

/// After `sweeps` sweeps all phasors share one argument within align_tol
/// and the power is within power_tol (relative) of (sum |z_n|)^2.
CheckReport check_fixed_point(std::size_t min_n, std::size_t max_n, std::size_t instances,
                              std::size_t sweeps, std::uint64_t seed, const ElementSolver& solver,
                              double align_tol = 1e-6, double power_tol = 1e-9);

}  // namespace phasealign
