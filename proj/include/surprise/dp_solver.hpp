#pragma once

// Closed-form dynamic-programming solution of the surprise allocation problem.
//
// One unit of budget is spread over days 1..m; r is the budget still unspent
// when day j begins. The Bellman equation
//
//   V_j(r) = opt_{0<=x<=r} { x log x - x log r + V_{j+1}(r - x) },  V_m(r) = 0
//
// is solved by p_j*(r) = r * exp(-gamma_j), where
//
//   gamma_m = 0,  gamma_{j-1} = gamma_j + exp(-gamma_j)   (j = m, ..., 1)
//
// and V_j(r) = -r * (gamma_{j-1} - 1). The stage function x log x - x log r is
// convex on [0, r], so x* is its interior minimizer: the policy minimizes sm2
// (maximizes expected surprise -sm2). Both signs are reported everywhere.

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "surprise/errors.hpp"
#include "surprise/objective.hpp"

namespace surprise {

// Number of days (stages); always >= 1.
class DaysCount {
 public:
  explicit DaysCount(long long m) : m_(check(m)) {}
  std::size_t value() const { return m_; }

 private:
  static std::size_t check(long long m) {
    if (m < 1) throw InvalidSize("number of days must be >= 1, got " + std::to_string(m));
    return static_cast<std::size_t>(m);
  }
  std::size_t m_;
};

// gamma_0 .. gamma_m. Immutable once built.
class GammaSequence {
 public:
  explicit GammaSequence(DaysCount m) : gammas_(m.value() + 1, 0.0) {
    const std::size_t days = m.value();
    gammas_[days] = 0.0;
    for (std::size_t j = days; j >= 1; --j) {
      gammas_[j - 1] = gammas_[j] + std::exp(-gammas_[j]);
    }
  }

  std::size_t days() const { return gammas_.size() - 1; }
  double operator[](std::size_t j) const { return gammas_[j]; }
  double at(std::size_t j) const {
    if (j > days()) {
      throw RangeError("gamma index " + std::to_string(j) + " outside 0.." + std::to_string(days()));
    }
    return gammas_[j];
  }
  // exp(-gamma_j): the optimal fraction of the remaining budget spent on day j.
  double hazard(std::size_t j) const { return std::exp(-at(j)); }
  std::span<const double> values() const { return gammas_; }

 private:
  std::vector<double> gammas_;
};

inline GammaSequence gamma_sequence(DaysCount m) { return GammaSequence(m); }

struct PolicyRow {
  std::size_t day = 0;
  double gamma = 0.0;
  double hazard = 0.0;
  double remaining_before = 0.0;
  double allocation = 0.0;
};

using PolicyTable = std::vector<PolicyRow>;

struct SolveResult {
  PolicyTable policy;
  GammaSequence gamma;
  ObjectiveValue objective;
  double value_at_root = 0.0;  // V_1(1) = 1 - gamma_0

  std::vector<double> allocations() const {
    std::vector<double> p;
    p.reserve(policy.size());
    for (const auto& row : policy) p.push_back(row.allocation);
    return p;
  }
};

namespace detail {

inline void check_day(std::size_t day, std::size_t lo, std::size_t hi) {
  if (day < lo || day > hi) {
    throw RangeError("day " + std::to_string(day) + " outside " + std::to_string(lo) + ".." +
                     std::to_string(hi));
  }
}

inline void check_budget(double r) {
  if (!(r >= 0.0 && r <= 1.0)) {
    throw RangeError("remaining budget " + shortest_repr(r) + " outside [0, 1]");
  }
}

}  // namespace detail

// Optimal spend on `day` with `remaining` budget left: remaining * exp(-gamma_day).
inline double policy_single(std::size_t day, double remaining, const GammaSequence& gamma) {
  detail::check_day(day, 1, gamma.days());
  detail::check_budget(remaining);
  return remaining * std::exp(-gamma[day]);
}

// V_day(remaining) = -remaining * (gamma_{day-1} - 1), the telescoped form of
// -sum_{i=day}^{m-1} p_i*(remaining).
inline double value_v(std::size_t day, double remaining, const GammaSequence& gamma) {
  detail::check_day(day, 1, gamma.days());
  detail::check_budget(remaining);
  if (day == gamma.days()) return 0.0;
  return -remaining * (gamma[day - 1] - 1.0);
}

// Right-hand side of the Bellman equation at decision x, with V_{day+1} as the
// continuation. 0 log 0 = 0 at x = 0; the log-ratio term vanishes at x = r.
inline double bellman_rhs(std::size_t day, double remaining, double x, const GammaSequence& gamma) {
  if (gamma.days() < 2) throw RangeError("Bellman step needs at least two days");
  detail::check_day(day, 1, gamma.days() - 1);
  detail::check_budget(remaining);
  if (remaining == 0.0 && x > 0.0) {
    throw DomainError("positive decision with zero remaining budget");
  }
  if (!(x >= 0.0 && x <= remaining)) {
    throw RangeError("decision " + shortest_repr(x) + " outside [0, " + shortest_repr(remaining) +
                     "]");
  }
  double stage = 0.0;
  if (x > 0.0 && x < remaining) stage = x * (std::log(x) - std::log(remaining));
  return stage + value_v(day + 1, remaining - x, gamma);
}

// d/dx of bellman_rhs at decision x: log(x / r) + gamma_day.
inline double stationarity_residual_at(std::size_t day, double remaining, double x,
                                       const GammaSequence& gamma) {
  if (gamma.days() < 2) throw RangeError("Bellman step needs at least two days");
  detail::check_day(day, 1, gamma.days() - 1);
  detail::check_budget(remaining);
  if (!(remaining > 0.0)) throw DomainError("stationarity needs a positive remaining budget");
  if (!(x > 0.0)) throw DomainError("log(x / r) undefined at x = 0");
  return std::log(x / remaining) + gamma[day];
}

// First-order condition of the Bellman scan at the closed-form decision; zero up to rounding.
inline double stationarity_residual(std::size_t day, double remaining, const GammaSequence& gamma) {
  if (gamma.days() < 2) throw RangeError("Bellman step needs at least two days");
  detail::check_day(day, 1, gamma.days() - 1);
  return stationarity_residual_at(day, remaining, policy_single(day, remaining, gamma), gamma);
}

// sum_{i=k}^{m-1} exp(-gamma_i) - (gamma_{k-1} - 1). Zero by telescoping the recursion.
inline double telescope_residual(const GammaSequence& gamma, std::size_t k) {
  detail::check_day(k, 1, gamma.days());
  double sum = 0.0;
  for (std::size_t i = k; i < gamma.days(); ++i) sum += std::exp(-gamma[i]);
  return sum - (gamma[k - 1] - 1.0);
}

// Apply the policy to successively depleted budgets starting from 1.
inline SolveResult rollout(DaysCount m) {
  GammaSequence gamma(m);
  const std::size_t days = m.value();
  PolicyTable table;
  table.reserve(days);
  double remaining = 1.0;
  for (std::size_t j = 1; j <= days; ++j) {
    PolicyRow row;
    row.day = j;
    row.gamma = gamma[j];
    row.hazard = std::exp(-gamma[j]);
    row.remaining_before = remaining;
    row.allocation = policy_single(j, remaining, gamma);
    remaining -= row.allocation;
    table.push_back(row);
  }
  std::vector<double> p;
  p.reserve(days);
  for (const auto& row : table) p.push_back(row.allocation);
  ObjectiveValue objective = evaluate(ProbabilityVector(std::move(p)));
  const double root = value_v(1, 1.0, gamma);
  return SolveResult{std::move(table), std::move(gamma), objective, root};
}

}  // namespace surprise
