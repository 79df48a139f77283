#pragma once

#include <cstdint>
#include <random>

#include "trinom/trinom.hpp"

namespace trinom::testing {

inline TrinomialSystem example_system() {
  return TrinomialSystem(IntegerMatrix::diagonal({4, 4}), IntegerMatrix::from_columns({{2, 1}, {1, 2}}));
}

inline TrinomialSystem quadratic_system() {
  return TrinomialSystem(IntegerMatrix::diagonal({2}), IntegerMatrix::diagonal({1}));
}

inline Rational R(long a, long b = 1) { return Rational(a, b); }

inline IntegerMatrix random_matrix(std::mt19937_64& rng, std::size_t n, int lo, int hi) {
  std::uniform_int_distribution<int> e(lo, hi);
  IntegerMatrix m(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = e(rng);
  return m;
}

inline IntegerMatrix random_nonsingular(std::mt19937_64& rng, std::size_t n, int lo, int hi) {
  while (true) {
    auto m = random_matrix(rng, n, lo, hi);
    if (determinant(m) != 0) return m;
  }
}

/// Random valid system with entries in [0, max_entry].
inline TrinomialSystem random_system(std::mt19937_64& rng, std::size_t n, int max_entry) {
  while (true) {
    try {
      return TrinomialSystem(random_matrix(rng, n, 0, max_entry), random_matrix(rng, n, 0, max_entry));
    } catch (const validation_error&) {
    }
  }
}

/// Random selection whose kappa is nonsingular.
inline Reduction random_reduction(std::mt19937_64& rng, const TrinomialSystem& sys) {
  auto all = valid_selections(sys);
  std::uniform_int_distribution<std::size_t> pick(0, all.size() - 1);
  return build_reduction(sys, all[pick(rng)]);
}

inline Rational random_rational(std::mt19937_64& rng, int num_lo, int num_hi, int den_hi) {
  std::uniform_int_distribution<int> num(num_lo, num_hi), den(1, den_hi);
  return Rational(num(rng), den(rng));
}

}  // namespace trinom::testing
