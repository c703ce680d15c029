#include "phasealign/verify.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "phasealign/reference.hpp"

namespace phasealign {

namespace {

constexpr std::size_t kMaxRecordedFailures = 8;

std::string describe(std::initializer_list<std::pair<const char*, double>> fields) {
  std::ostringstream os;
  os.precision(17);
  bool first = true;
  for (const auto& [key, value] : fields) {
    if (!first) os << ' ';
    os << key << '=' << value;
    first = false;
  }
  return os.str();
}

PhaseVector uniform_phases(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> uniform(0.0, kTwoPi);
  std::vector<double> out(n);
  for (double& p : out) p = uniform(rng);
  return PhaseVector(std::move(out));
}

std::size_t draw_size(std::size_t min_n, std::size_t max_n, std::mt19937_64& rng) {
  return std::uniform_int_distribution<std::size_t>(min_n, max_n)(rng);
}

double pair_reading(Complex z0, Complex z, double phi) { return std::norm(z0 + z * std::polar(1.0, phi)); }

}  // namespace

void CheckReport::fail(std::string what) {
  ++failed_cases;
  if (failures.size() < kMaxRecordedFailures) failures.push_back(std::move(what));
}

ElementSolver solver_from(ClosedFormUpdate closed_form) {
  return [cf = std::move(closed_form)](const AngleTriple& angles, const Readings& y) {
    if (angles.is_standard()) return cf(y[0], y[1], y[2]);
    return solve_three_point(angles, y[0], y[1], y[2]);
  };
}

CheckReport check_solver_equivalence(std::size_t pairs, std::size_t random_triples, std::uint64_t seed,
                                     const ClosedFormUpdate& closed_form, double closed_form_tol,
                                     double recovery_tol) {
  CheckReport report;
  report.name = "solver_equivalence";
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uniform(0.0, kTwoPi);

  std::vector<AngleTriple> triples{AngleTriple::standard()};
  while (triples.size() < random_triples + 1) {
    const double a = uniform(rng), b = uniform(rng), c = uniform(rng);
    if (std::abs(design_determinant(a, b, c)) > AngleTriple::kMinDeterminant) triples.emplace_back(a, b, c);
  }

  const EffectiveGains draws = generate_channels(2 * pairs, rng());
  double worst_closed_form = 0.0;
  for (std::size_t p = 0; p < pairs; ++p) {
    const Complex z0 = draws[2 * p];
    const Complex z = draws[2 * p + 1];
    const double expected = wrap_phase(principal_arg(z0 * std::conj(z)));

    const double y1 = pair_reading(z0, z, 0.0);
    const double y2 = pair_reading(z0, z, kPi / 2.0);
    const double y3 = pair_reading(z0, z, kPi);
    const double closed = closed_form(y1, y2, y3);
    const double general = solve_three_point(AngleTriple::standard(), y1, y2, y3);
    const double gap = angular_distance(closed, general);
    worst_closed_form = std::max(worst_closed_form, gap);
    ++report.cases;
    if (gap > closed_form_tol) {
      report.fail("closed form vs general solve: " + describe({{"pair", double(p)}, {"gap", gap}}));
    }

    for (std::size_t t = 0; t < triples.size(); ++t) {
      const AngleTriple& angles = triples[t];
      const double got = solve_three_point(angles, pair_reading(z0, z, angles[0]),
                                           pair_reading(z0, z, angles[1]), pair_reading(z0, z, angles[2]));
      const double err = angular_distance(got, expected);
      report.worst = std::max(report.worst, err);
      ++report.cases;
      if (err > recovery_tol) {
        report.fail("Arg(z0 z*) recovery: " +
                    describe({{"pair", double(p)}, {"triple", double(t)}, {"error", err}}));
      }
    }
  }
  report.worst = std::max(report.worst, worst_closed_form);
  return report;
}

CheckReport check_oracle_sandwich(std::size_t max_n, std::size_t instances, std::uint64_t seed) {
  CheckReport report;
  report.name = "oracle_sandwich";
  std::mt19937_64 rng(seed);
  for (std::size_t n = 1; n <= max_n; ++n) {
    const std::vector<std::size_t> grids =
        n <= 2 ? std::vector<std::size_t>{8, 32, 128} : std::vector<std::size_t>{8, 32};
    for (std::size_t i = 0; i < instances; ++i) {
      const EffectiveGains z = generate_channels(n, rng());
      const double bound = optimal_power_bound(z);
      double previous_gap = INFINITY;
      for (std::size_t k : grids) {
        const double best = brute_force_max(z, GridSpec{k}).power;
        const double gap = bound - best;
        report.worst = std::max(report.worst, -gap / bound);
        if (best > bound * (1.0 + 1e-12)) {
          report.fail("grid max above bound: " + describe({{"n", double(n)}, {"K", double(k)}, {"excess", -gap}}));
          break;
        }
        if (n == 2 && gap > previous_gap + 1e-12 * bound) {
          report.fail("gap grew with K: " + describe({{"K", double(k)}, {"gap", gap}, {"previous", previous_gap}}));
          break;
        }
        previous_gap = gap;
      }
      ++report.cases;
    }
  }
  return report;
}

CheckReport check_cross_validation(std::size_t max_n, std::size_t instances, std::uint64_t seed,
                                   const ElementSolver& solver, std::size_t grid_points, std::size_t sweeps) {
  CheckReport report;
  report.name = "cross_validation";
  std::mt19937_64 rng(seed);
  const SequentialOptions options{AngleTriple::standard(), solver};
  for (std::size_t n = 1; n <= max_n; ++n) {
    for (std::size_t i = 0; i < instances; ++i) {
      const EffectiveGains z = generate_channels(n, rng());
      const double bound = optimal_power_bound(z);
      const double grid_best = brute_force_max(z, GridSpec{grid_points}).power;
      MeasurementOracle oracle(z);
      const OptimizationTrace trace =
          run_sequential(oracle, n, sweeps, uniform_phases(n, rng), Ascending{}, options);
      const double got = trace.final_power();
      const double shortfall = (grid_best - got) / grid_best;
      report.worst = std::max(report.worst, shortfall);
      ++report.cases;
      if (got < grid_best * (1.0 - 1e-6)) {
        report.fail("sequential below grid max: " +
                    describe({{"n", double(n)}, {"sequential", got}, {"grid", grid_best}}));
      } else if (got > bound * (1.0 + 1e-12) || grid_best > bound * (1.0 + 1e-12)) {
        report.fail("above analytic bound: " + describe({{"n", double(n)}, {"sequential", got}, {"bound", bound}}));
      }
    }
  }
  return report;
}

CheckReport check_monotonicity(std::size_t min_n, std::size_t max_n, std::size_t instances, std::size_t sweeps,
                               std::uint64_t seed, const ElementSolver& solver) {
  CheckReport report;
  report.name = "monotonicity";
  std::mt19937_64 rng(seed);
  const SequentialOptions options{AngleTriple::standard(), solver};
  for (std::size_t i = 0; i < instances; ++i) {
    const std::size_t n = draw_size(min_n, max_n, rng);
    const EffectiveGains z = generate_channels(n, rng());
    MeasurementOracle oracle(z);
    const OptimizationTrace trace = run_sequential(oracle, n, sweeps, uniform_phases(n, rng), Ascending{}, options);
    ++report.cases;
    for (std::size_t k = 1; k < trace.samples.size(); ++k) {
      const double before = trace.samples[k - 1].power;
      const double after = trace.samples[k].power;
      const double drop = before > 0.0 ? (before - after) / before : 0.0;
      report.worst = std::max(report.worst, drop);
      if (after < before - 1e-9 * before) {
        report.fail("objective decreased: " +
                    describe({{"instance", double(i)}, {"update", double(k)}, {"before", before}, {"after", after}}));
        break;
      }
    }
  }
  return report;
}

CheckReport check_fixed_point(std::size_t min_n, std::size_t max_n, std::size_t instances, std::size_t sweeps,
                              std::uint64_t seed, const ElementSolver& solver, double align_tol,
                              double power_tol) {
  CheckReport report;
  report.name = "fixed_point_alignment";
  std::mt19937_64 rng(seed);
  const SequentialOptions options{AngleTriple::standard(), solver};
  for (std::size_t i = 0; i < instances; ++i) {
    const std::size_t n = draw_size(min_n, max_n, rng);
    const EffectiveGains z = generate_channels(n, rng());
    MeasurementOracle oracle(z);
    const OptimizationTrace trace = run_sequential(oracle, n, sweeps, uniform_phases(n, rng), Ascending{}, options);
    const double bound = optimal_power_bound(z);
    const double power = received_power(z, trace.final_phases);
    const double rel = std::abs(bound - power) / bound;
    report.worst = std::max(report.worst, rel);
    ++report.cases;
    if (!check_fixed_point_alignment(z, trace.final_phases, align_tol)) {
      report.fail("phasors not aligned: " + describe({{"instance", double(i)}, {"n", double(n)}}));
    } else if (rel > power_tol) {
      report.fail("power short of bound: " + describe({{"instance", double(i)}, {"relative_gap", rel}}));
    }
  }
  return report;
}

}  // namespace phasealign
