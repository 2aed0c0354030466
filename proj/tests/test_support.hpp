// shared helpers for the unit tests

#pragma once

#include "opcalc/generators.hpp"
#include "opcalc/linalg.hpp"
#include "opcalc/rng.hpp"

namespace opcalc::test {

inline CMat diag2(double a, double b) {
  CMat m = CMat::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}

inline CMat cdiag(std::initializer_list<Complex> d) {
  const int n = static_cast<int>(d.size());
  CMat m = CMat::Zero(n, n);
  int i = 0;
  for (const Complex& v : d) m(i, i) = v, ++i;
  return m;
}

inline CMat random_hermitian(std::uint64_t seed, int n) {
  Rng rng(seed);
  return hermitize(gaussian_matrix(rng, n, n));
}

}  // namespace opcalc::test
