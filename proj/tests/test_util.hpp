#pragma once

#include <cstdlib>
#include <random>

#include "stiffkit/linalg.hpp"

namespace stiffkit::testing {

inline unsigned long test_seed() {
  if (const char* env = std::getenv("STIFFKIT_SEED")) return std::strtoul(env, nullptr, 10);
  return 20250810UL;
}

inline std::mt19937_64 make_rng(unsigned long salt = 0) { return std::mt19937_64(test_seed() + salt); }

inline Vec random_vec(std::mt19937_64& rng, int n, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  Vec v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

inline RealMatrix random_matrix(std::mt19937_64& rng, int n, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  RealMatrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = u(rng);
  return m;
}

// Diagonally dominant, hence comfortably well conditioned.
inline RealMatrix random_well_conditioned(std::mt19937_64& rng, int n) {
  RealMatrix m = random_matrix(rng, n);
  for (int i = 0; i < n; ++i) m(i, i) += n;
  return m;
}

}  // namespace stiffkit::testing
