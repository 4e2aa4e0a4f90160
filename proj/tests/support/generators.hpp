#pragma once

// Hand-rolled generators for the property tests. Each case gets its own
// seed so that a failure message pins down a reproducible input.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace sslab::testing {

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  /// Uniform on (lo, hi]: never returns lo.
  double open_closed(double lo, double hi) { return hi - (hi - lo) * std::uniform_real_distribution<double>(0.0, 1.0)(rng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  bool coin() { return integer(0, 1) == 1; }
  std::mt19937_64& engine() { return rng_; }

  std::vector<double> vector(std::size_t n, double lo, double hi) {
    std::vector<double> v(n);
    for (auto& x : v) x = uniform(lo, hi);
    return v;
  }

 private:
  std::mt19937_64 rng_;
};

/// Runs body(gen, case_index) for `count` cases, each seeded from (seed, index).
template <class Body>
void for_all(int count, std::uint64_t seed, Body&& body) {
  for (int i = 0; i < count; ++i) {
    Gen g(seed * 0x9E3779B97F4A7C15ULL + static_cast<std::uint64_t>(i));
    body(g, i);
  }
}

}  // namespace sslab::testing
