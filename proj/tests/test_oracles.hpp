#pragma once

// Test-only reference computations, kept independent of the library code paths.

#include <cmath>
#include <cstddef>
#include <random>
#include <vector>

namespace surprise::testing {

// Raw SM1 form, term by term: sum p_j log(p_j / (T_j / m)) - sum p_j, with
// T_j summed left-to-right from scratch for each j.
inline double direct_sm1(const std::vector<double>& p) {
  const double m = static_cast<double>(p.size());
  double total = 0.0;
  double mass = 0.0;
  for (std::size_t j = 0; j < p.size(); ++j) {
    mass += p[j];
    if (p[j] == 0.0) continue;
    double tail = 0.0;
    for (std::size_t i = j; i < p.size(); ++i) tail += p[i];
    total += p[j] * std::log(p[j] / (tail / m));
  }
  return total - mass;
}

// Seeded draw from the simplex interior via normalized Exp(1) variates, using
// the standard library generator rather than the library's own.
inline std::vector<double> random_simplex_point(std::size_t m, std::mt19937_64& gen) {
  std::exponential_distribution<double> exp1(1.0);
  std::vector<double> p(m);
  double total = 0.0;
  for (double& v : p) {
    do {
      v = exp1(gen);
    } while (!(v > 1e-6));
    total += v;
  }
  for (double& v : p) v /= total;
  return p;
}

// Interior point whose smallest coordinate exceeds `floor`, by rejection.
inline std::vector<double> interior_point(std::size_t m, std::mt19937_64& gen, double floor) {
  for (;;) {
    auto p = random_simplex_point(m, gen);
    bool ok = true;
    for (double v : p) ok = ok && v > floor;
    if (ok) return p;
  }
}

// Values computed with 40-digit arithmetic (mpmath) and rounded to binary64.
namespace frozen {
inline constexpr double kInvE = 0.36787944117144233;
inline constexpr double kGamma0M2 = 1.3678794411714423;
inline constexpr double kGamma0M3 = 1.6225258212150248;
inline constexpr double kRollout3[] = {0.2546463800435825, 0.27420027318467847,
                                       0.47115334677173903};
inline constexpr double kTail3[] = {1.0, 0.7453536199564175, 0.47115334677173903};
inline constexpr double kSm1Rollout3 = -0.52391353254691513;
inline constexpr double kSm2Half = -0.34657359027997265;
inline constexpr double kSm1Half = -0.65342640972002735;
inline constexpr double kLog2 = 0.69314718055994531;
}  // namespace frozen

}  // namespace surprise::testing
