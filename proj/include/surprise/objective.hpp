#pragma once

// Surprise objectives on the probability simplex.
//
// For a distribution p of the exam day over m days, the tail mass
// T_j = p_j + ... + p_m is the probability the exam has not happened before
// day j. The reduced objective is
//
//   sm2(p) = sum_j p_j * (log p_j - log T_j)          (<= 0)
//
// and the full objective differs from it by a constant:
//
//   sm1(p) = sum_j p_j * log(p_j / (T_j / m)) - sum_j p_j = sm2(p) + log m - 1.
//
// Terms with p_j = 0 contribute exactly zero. Logs are natural.

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "surprise/errors.hpp"
#include "surprise/format.hpp"

namespace surprise {

inline constexpr double kSimplexTolerance = 1e-9;

// A validated point of the probability simplex. Entries are stored as given;
// no renormalization takes place.
class ProbabilityVector {
 public:
  explicit ProbabilityVector(std::vector<double> values) : values_(std::move(values)) {
    if (values_.empty()) throw InvalidDistribution("distribution is empty");
    double total = 0.0;
    for (std::size_t j = values_.size(); j-- > 0;) {
      const double v = values_[j];
      if (!std::isfinite(v)) {
        throw InvalidDistribution("entry " + std::to_string(j + 1) + " is not finite");
      }
      if (v < 0.0) {
        throw InvalidDistribution("entry " + std::to_string(j + 1) + " is negative (" +
                                  shortest_repr(v) + ")");
      }
      total += v;
    }
    if (std::abs(total - 1.0) > kSimplexTolerance) {
      throw InvalidDistribution("sum " + shortest_repr(total) + " exceeds tolerance " +
                                shortest_repr(kSimplexTolerance));
    }
  }

  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  std::span<const double> values() const { return values_; }
  auto begin() const { return values_.begin(); }
  auto end() const { return values_.end(); }

 private:
  std::vector<double> values_;
};

struct ObjectiveValue {
  double sm2 = 0.0;
  double sm1 = 0.0;
  double expected_surprise = 0.0;  // -sm2
};

namespace detail {

// T_j = sum_{i>=j} p_i by one right-to-left pass. Works on any nonnegative
// vector, not only simplex points.
inline std::vector<double> tail_masses(std::span<const double> p) {
  std::vector<double> tail(p.size());
  double acc = 0.0;
  for (std::size_t j = p.size(); j-- > 0;) {
    acc += p[j];
    tail[j] = acc;
  }
  return tail;
}

inline double sm2(std::span<const double> p) {
  const auto tail = tail_masses(p);
  double total = 0.0;
  for (std::size_t j = 0; j < p.size(); ++j) {
    if (p[j] == 0.0) continue;
    total += p[j] * (std::log(p[j]) - std::log(tail[j]));
  }
  return total;
}

}  // namespace detail

inline std::vector<double> tail_masses(const ProbabilityVector& p) {
  return detail::tail_masses(p.values());
}

inline double eval_sm2(const ProbabilityVector& p) { return detail::sm2(p.values()); }

inline double eval_sm1(const ProbabilityVector& p) {
  return eval_sm2(p) + std::log(static_cast<double>(p.size())) - 1.0;
}

inline ObjectiveValue evaluate(const ProbabilityVector& p) {
  ObjectiveValue out;
  out.sm2 = eval_sm2(p);
  out.sm1 = out.sm2 + std::log(static_cast<double>(p.size())) - 1.0;
  out.expected_surprise = 0.0 - out.sm2;
  return out;
}

// Unconstrained partial derivatives of sm2 at an interior point:
//   g_j = log p_j + 1 - log T_j - sum_{k<=j} p_k / T_k
inline std::vector<double> gradient_sm2(const ProbabilityVector& p) {
  for (std::size_t j = 0; j < p.size(); ++j) {
    if (!(p[j] > 0.0)) {
      throw DomainError("gradient undefined on the simplex boundary (p_" + std::to_string(j + 1) +
                        " = 0)");
    }
  }
  const auto tail = tail_masses(p);
  std::vector<double> grad(p.size());
  double hazard_sum = 0.0;
  for (std::size_t j = 0; j < p.size(); ++j) {
    hazard_sum += p[j] / tail[j];
    grad[j] = std::log(p[j]) + 1.0 - std::log(tail[j]) - hazard_sum;
  }
  return grad;
}

// Surprise when the exam falls on `day` (1-based): log(T_day / p_day) >= 0.
inline double realized_surprise(const ProbabilityVector& p, std::size_t day) {
  if (day < 1 || day > p.size()) {
    throw RangeError("day " + std::to_string(day) + " outside 1.." + std::to_string(p.size()));
  }
  const double pj = p[day - 1];
  if (pj == 0.0) {
    throw DomainError("day " + std::to_string(day) + " has zero probability");
  }
  double tail = 0.0;
  for (std::size_t i = p.size(); i-- > day - 1;) tail += p[i];
  return std::log(tail / pj);
}

}  // namespace surprise
