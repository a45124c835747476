#pragma once

// Hand-rolled generators for property tests. Every suite seeds its own
// engine so failures reproduce.

#include <cmath>
#include <cstdint>
#include <random>

#include "searchload/lattice.hpp"

namespace searchload::testing {

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  double log_uniform(double lo, double hi) { return std::exp(uniform(std::log(lo), std::log(hi))); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

  template <typename T, std::size_t N>
  T pick(const T (&items)[N]) {
    return items[static_cast<std::size_t>(integer(0, static_cast<int>(N) - 1))];
  }

 private:
  std::mt19937_64 rng_;
};

inline double deg(double d) { return d * 3.14159265358979323846 / 180.0; }

/// One-dimensional reference scenario: 2.5..10 deg beams, 5..40 ms dwells,
/// 50 km, 1000 m/s, +-60 deg by 16 bars.
inline RadarScenario fence_scenario() {
  RadarScenario sc;
  sc.theta_bw_min = deg(2.5);
  sc.theta_bw_max = deg(10.0);
  sc.t_d_min = 5e-3;
  sc.t_d_max = 40e-3;
  sc.r0 = 50e3;
  sc.v_t = 1000.0;
  sc.az = Extent::radians(deg(60.0));
  sc.el = Extent::bars(16.0);
  sc.q = 1;
  return sc;
}

/// Same, two-dimensional with +-15 deg elevation.
inline RadarScenario volume_scenario() {
  RadarScenario sc = fence_scenario();
  sc.el = Extent::radians(deg(15.0));
  sc.q = 2;
  return sc;
}

}  // namespace searchload::testing
