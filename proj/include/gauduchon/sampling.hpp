#pragma once

// Seeded draws for the property suites and the verify-lemmas command.
// Plain std::mt19937_64, so a seed reproduces a run exactly.

#include <random>
#include <vector>

#include "gauduchon/numeric.hpp"

namespace gauduchon::sampling {

inline Rational rational(std::mt19937_64& rng, int num_max = 6, int den_max = 5) {
  std::uniform_int_distribution<int> num(-num_max, num_max), den(1, den_max);
  Rational q(num(rng), den(rng));
  q.canonicalize();
  return q;
}

inline GaussRational gauss(std::mt19937_64& rng, int num_max = 3, int den_max = 3) {
  Rational re = rational(rng, num_max, den_max);
  return {re, rational(rng, num_max, den_max)};
}

/// Parameter vector for the LCK family; never all zero.
inline std::vector<GaussRational> lck_vector(std::mt19937_64& rng, int n) {
  for (;;) {
    std::vector<GaussRational> a;
    bool nonzero = false;
    for (int i = 0; i < n; ++i) {
      a.push_back(gauss(rng));
      nonzero = nonzero || !a.back().is_zero();
    }
    if (nonzero) return a;
  }
}

}  // namespace gauduchon::sampling
