#pragma once

#include <stdexcept>
#include <string>

namespace surprise {

// Problem size out of range (m < 1, grid too large, ...).
class InvalidSize : public std::invalid_argument {
 public:
  explicit InvalidSize(const std::string& what) : std::invalid_argument(what) {}
};

// Day index or budget outside its admissible interval.
class RangeError : public std::out_of_range {
 public:
  explicit RangeError(const std::string& what) : std::out_of_range(what) {}
};

// Function evaluated where it is undefined (log of zero, boundary gradient).
class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

// A vector that is not a point of the probability simplex.
class InvalidDistribution : public std::invalid_argument {
 public:
  explicit InvalidDistribution(const std::string& what) : std::invalid_argument(what) {}
};

}  // namespace surprise
