// generators.hpp — seeded instance generators for the verification campaigns.
// Deterministic in the seed, independent of platform and thread schedule.

#pragma once

#include "opcalc/calculus.hpp"
#include "opcalc/linalg.hpp"
#include "opcalc/rng.hpp"

#include <cstdint>

namespace opcalc {

CMat gaussian_matrix(Rng& rng, int rows, int cols);

// Gaussian matrix rescaled to operator norm target_norm (within 1e-12);
// target 0 gives the zero matrix.
Contraction gen_contraction(std::uint64_t seed, int n, double target_norm);

// Haar-style unitary from the QR of a Gaussian matrix, phases fixed;
// unitarity residual <= 1e-12
CMat gen_unitary(std::uint64_t seed, int n);

struct ContractionPair {
  Contraction t0;
  Contraction t1;
  bool clipped = false;       // T0 + gap direction left the unit ball
  double achieved_gap = 0.0;  // ||T1 - T0||_p after any clipping
};

// T0 with ||T0|| = norm0; T1 = T0 + D with ||D||_p = gap before clipping.
// Clipping shrinks along the segment toward T0 until the result is a
// contraction, preserving the gap direction.
ContractionPair gen_pair_with_gap(std::uint64_t seed, int n, double norm0, double gap,
                                  const SchattenOrder& p);

// PSD contractions with spec(A) in [0, 1] and spec(B) in [delta, 1]
struct PsdPair {
  CMat a;
  CMat b;
};

PsdPair gen_psd_pair(std::uint64_t seed, int n, double delta);

}  // namespace opcalc
