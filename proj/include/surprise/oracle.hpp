#pragma once

// Independent checks of the closed-form policy. Nothing here touches the
// gamma recursion except to fetch the closed-form point being compared.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "surprise/dp_solver.hpp"
#include "surprise/errors.hpp"
#include "surprise/objective.hpp"
#include "surprise/rng.hpp"

namespace surprise {

enum class GridSense { kMinimizeSm2, kMaximizeSm2 };

struct GridSpec {
  long long resolution = 1000;  // lattice denominator N
  GridSense sense = GridSense::kMinimizeSm2;
  // Agreement threshold in L-infinity; one lattice step (1/N) when unset.
  std::optional<double> tolerance;
};

struct AscentConfig {
  long long max_iterations = 100'000;
  double step_size = 0.5;
  long long restarts = 8;
  double convergence_tol = 1e-12;
  std::uint64_t seed = 42;
  double agreement_tol = 1e-6;
};

struct OracleReport {
  ProbabilityVector best_point{std::vector<double>{1.0}};
  double best_value = 0.0;  // sm2 at best_point
  ProbabilityVector closed_form_point{std::vector<double>{1.0}};
  double linf_gap = 0.0;
  double tolerance = 0.0;
  bool agrees = false;
  // Iterative oracle only.
  bool converged = true;
  long long iterations = 0;
};

inline constexpr double kMaxGridPoints = 1e8;

// Number of length-m compositions of N: C(N + m - 1, m - 1). Saturates at +inf.
inline double composition_count(std::size_t m, long long resolution) {
  double count = 1.0;
  const std::size_t k = m - 1;
  for (std::size_t i = 1; i <= k; ++i) {
    count = count * static_cast<double>(resolution + static_cast<long long>(i)) /
            static_cast<double>(i);
    if (count > 1e300) return std::numeric_limits<double>::infinity();
  }
  return std::round(count);
}

namespace detail {

inline double linf_distance(std::span<const double> a, std::span<const double> b) {
  double gap = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) gap = std::max(gap, std::abs(a[j] - b[j]));
  return gap;
}

// Gradient of sm2 for a strictly positive vector (no simplex check).
inline std::vector<double> gradient_sm2(std::span<const double> p) {
  const auto tail = tail_masses(p);
  std::vector<double> grad(p.size());
  double hazard_sum = 0.0;
  for (std::size_t j = 0; j < p.size(); ++j) {
    hazard_sum += p[j] / tail[j];
    grad[j] = std::log(p[j]) + 1.0 - std::log(tail[j]) - hazard_sum;
  }
  return grad;
}

struct AscentRun {
  std::vector<double> point;
  double surprise = 0.0;  // -sm2
  bool converged = false;
  long long iterations = 0;
};

// Exponentiated-gradient ascent on -sm2 from one interior start.
inline AscentRun ascend(std::vector<double> p, const AscentConfig& config) {
  constexpr double kMinStep = 1e-30;
  AscentRun run;
  double value = -sm2(p);
  double step = config.step_size;
  std::vector<double> next(p.size());

  for (long long it = 0; it < config.max_iterations; ++it) {
    const auto grad = gradient_sm2(p);
    const double shift = *std::min_element(grad.begin(), grad.end());

    double next_value = 0.0;
    for (;;) {
      double norm = 0.0;
      for (std::size_t j = 0; j < p.size(); ++j) {
        next[j] = p[j] * std::exp(-step * (grad[j] - shift));
        norm += next[j];
      }
      for (double& v : next) v /= norm;
      next_value = -sm2(next);
      // Accept unless the objective drops by more than rounding noise.
      if (next_value >= value - 4.0 * std::numeric_limits<double>::epsilon() * std::abs(value)) {
        break;
      }
      step *= 0.5;
      if (step < kMinStep) break;
    }
    run.iterations = it + 1;
    if (step < kMinStep) break;

    const double change = linf_distance(next, p);
    p.swap(next);
    value = next_value;
    if (change < config.convergence_tol) {
      run.converged = true;
      break;
    }
  }
  run.point = std::move(p);
  run.surprise = value;
  return run;
}

// Flat draw from the simplex interior: normalized Exp(1) variates.
inline std::vector<double> random_interior_point(std::size_t m, SplitMix64& rng) {
  std::vector<double> p(m);
  double total = 0.0;
  for (double& v : p) {
    do {
      v = rng.exponential();
    } while (!(v > 0.0));
    total += v;
  }
  for (double& v : p) v /= total;
  return p;
}

}  // namespace detail

// Exhaustive scan of the lattice {k / N : sum k = N}. Ties go to the
// lexicographically smallest composition.
inline OracleReport grid_search(DaysCount m, const GridSpec& spec) {
  if (spec.resolution < 2) throw InvalidSize("grid resolution must be >= 2");
  const std::size_t days = m.value();
  const double count = composition_count(days, spec.resolution);
  if (count > kMaxGridPoints) {
    throw InvalidSize("grid has " + shortest_repr(count) + " points, cap is " +
                      shortest_repr(kMaxGridPoints));
  }

  const long long n = spec.resolution;
  const double denom = static_cast<double>(n);
  const bool minimize = spec.sense == GridSense::kMinimizeSm2;

  std::vector<long long> counts(days, 0);
  std::vector<double> point(days, 0.0);
  std::vector<double> best;
  double best_value = 0.0;

  // Odometer over compositions in lexicographic order.
  counts[days - 1] = n;
  for (;;) {
    for (std::size_t j = 0; j < days; ++j) point[j] = static_cast<double>(counts[j]) / denom;
    const double value = detail::sm2(point);
    if (best.empty() || (minimize ? value < best_value : value > best_value)) {
      best = point;
      best_value = value;
    }
    // Lexicographic successor: the last slot holds the slack; grow the
    // rightmost free slot that has slack available, zeroing those after it.
    bool advanced = false;
    long long rest = counts[days - 1];
    for (std::size_t i = days - 1; i-- > 0;) {
      if (rest > 0) {
        ++counts[i];
        counts[days - 1] = rest - 1;
        advanced = true;
        break;
      }
      rest += counts[i];
      counts[i] = 0;
    }
    if (!advanced) break;
  }

  const auto closed = rollout(m).allocations();
  OracleReport report;
  report.best_value = best_value;
  report.linf_gap = detail::linf_distance(best, closed);
  report.tolerance = spec.tolerance.value_or(1.0 / denom);
  report.agrees = report.linf_gap <= report.tolerance;
  report.best_point = ProbabilityVector(std::move(best));
  report.closed_form_point = ProbabilityVector(closed);
  return report;
}

// Maximizes -sm2 by multiplicative updates p <- normalize(p * exp(-step * grad)),
// halving the step whenever the objective would drop. Starts from the uniform
// point and `restarts` random interior points (restart i seeded with seed + i).
inline OracleReport ascent_optimize(DaysCount m, const AscentConfig& config) {
  if (!(config.step_size > 0.0)) throw InvalidSize("step size must be positive");
  if (!(config.convergence_tol > 0.0)) throw InvalidSize("convergence tolerance must be positive");
  if (config.max_iterations < 1) throw InvalidSize("max_iterations must be >= 1");
  if (config.restarts < 0) throw InvalidSize("restarts must be >= 0");

  const std::size_t days = m.value();
  const auto closed = rollout(m).allocations();

  OracleReport report;
  report.closed_form_point = ProbabilityVector(closed);
  report.tolerance = config.agreement_tol;

  if (days == 1) {
    report.best_point = ProbabilityVector(std::vector<double>{1.0});
    report.best_value = 0.0;
    report.linf_gap = 0.0;
    report.agrees = true;
    report.converged = true;
    return report;
  }

  detail::AscentRun best = detail::ascend(std::vector<double>(days, 1.0 / static_cast<double>(days)), config);
  long long total_iterations = best.iterations;
  for (long long i = 0; i < config.restarts; ++i) {
    SplitMix64 rng(config.seed + static_cast<std::uint64_t>(i));
    auto run = detail::ascend(detail::random_interior_point(days, rng), config);
    total_iterations += run.iterations;
    if (run.surprise > best.surprise) best = std::move(run);
  }

  report.best_value = -best.surprise;
  report.linf_gap = detail::linf_distance(best.point, closed);
  report.converged = best.converged;
  report.iterations = total_iterations;
  report.agrees = best.converged && report.linf_gap <= report.tolerance;
  report.best_point = ProbabilityVector(std::move(best.point));
  return report;
}

// Central differences of sm2 along each coordinate axis (off-simplex perturbation).
inline std::vector<double> finite_diff_gradient(const ProbabilityVector& p, double h) {
  if (!(h > 0.0)) throw DomainError("finite-difference step must be positive");
  for (std::size_t j = 0; j < p.size(); ++j) {
    if (!(p[j] - h > 0.0 && p[j] + h < 1.0)) {
      throw DomainError("perturbation of coordinate " + std::to_string(j + 1) +
                        " leaves (0, 1)");
    }
  }
  std::vector<double> x(p.begin(), p.end());
  std::vector<double> grad(p.size());
  for (std::size_t j = 0; j < p.size(); ++j) {
    const double saved = x[j];
    x[j] = saved + h;
    const double up = detail::sm2(x);
    x[j] = saved - h;
    const double down = detail::sm2(x);
    x[j] = saved;
    grad[j] = (up - down) / (2.0 * h);
  }
  return grad;
}

}  // namespace surprise
