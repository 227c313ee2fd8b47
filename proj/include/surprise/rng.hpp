#pragma once

// SplitMix64 (Steele, Lea and Flood; public-domain reference by S. Vigna).
//
//   state += 0x9E3779B97F4A7C15
//   z = state
//   z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//   z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//   return z ^ (z >> 31)
//
// Reference vector: seed 1234567 yields 6457827717110365317,
// 3203168211198807973, 9817491932198370423, 4593380528125082431,
// 16408922859458223821. Doubles use the top 53 bits: (x >> 11) * 2^-53.
// Sub-streams are seeded as seed + i.

#include <cmath>
#include <cstdint>
#include <limits>

namespace surprise {

class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform on [0, 1).
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  // Exp(1) by inversion; 1 - u lies in (0, 1] so the log is finite.
  double exponential() { return -std::log(1.0 - uniform()); }

  std::uint64_t state() const { return state_; }

 private:
  std::uint64_t state_;
};

}  // namespace surprise
