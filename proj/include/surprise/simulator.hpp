#pragma once

// Monte Carlo estimate of expected surprise: draw the exam day from p and
// average log(T_j / p_j) over the draws.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "surprise/errors.hpp"
#include "surprise/objective.hpp"
#include "surprise/rng.hpp"

namespace surprise {

struct SimulationConfig {
  std::uint64_t samples = 1'000'000;
  std::uint64_t seed = 42;
};

struct SimulationResult {
  double mean = 0.0;
  double std_error = 0.0;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
};

// Inverse-CDF draw of a 1-based day. Days with zero mass are never returned.
inline std::size_t sample_day(const ProbabilityVector& p, SplitMix64& rng) {
  const double u = rng.uniform();
  double cumulative = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t j = 0; j < p.size(); ++j) {
    if (p[j] == 0.0) continue;
    last_positive = j;
    cumulative += p[j];
    if (u < cumulative) return j + 1;
  }
  // u landed above a cumulative total rounded slightly below 1.
  return last_positive + 1;
}

inline SimulationResult estimate_expected_surprise(const ProbabilityVector& p,
                                                   const SimulationConfig& config) {
  if (config.samples < 1) throw InvalidSize("sample count must be >= 1");

  const auto tail = tail_masses(p);
  std::vector<double> surprise(p.size(), 0.0);
  for (std::size_t j = 0; j < p.size(); ++j) {
    if (p[j] > 0.0) surprise[j] = std::log(tail[j] / p[j]);
  }

  // Welford accumulation in draw order.
  SplitMix64 rng(config.seed);
  double mean = 0.0;
  double m2 = 0.0;
  for (std::uint64_t i = 0; i < config.samples; ++i) {
    const double x = surprise[sample_day(p, rng) - 1];
    const double delta = x - mean;
    mean += delta / static_cast<double>(i + 1);
    m2 += delta * (x - mean);
  }

  SimulationResult out;
  out.mean = mean;
  out.samples = config.samples;
  out.seed = config.seed;
  if (config.samples > 1) {
    const double n = static_cast<double>(config.samples);
    out.std_error = std::sqrt(m2 / (n - 1.0)) / std::sqrt(n);
  }
  return out;
}

}  // namespace surprise
