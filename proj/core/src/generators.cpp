#include "opcalc/generators.hpp"

#include <cmath>

namespace opcalc {

CMat gaussian_matrix(Rng& rng, int rows, int cols) {
  CMat g(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) g(i, j) = rng.cnormal();
  return g;
}

Contraction gen_contraction(std::uint64_t seed, int n, double target_norm) {
  if (n < 1) throw std::invalid_argument("gen_contraction: n must be >= 1");
  if (!(target_norm >= 0.0) || target_norm > 1.0)
    throw std::invalid_argument("gen_contraction: target_norm must be in [0, 1]");
  Rng rng(mix_seed(0xc0174ac710eULL, seed));
  if (target_norm == 0.0) return Contraction(CMat::Zero(n, n));
  CMat g = gaussian_matrix(rng, n, n);
  const double nrm = operator_norm(g);
  // slight undershoot keeps the rescale flag off at target_norm = 1
  g *= target_norm * (1.0 - 1e-13) / nrm;
  return Contraction(std::move(g));
}

CMat gen_unitary(std::uint64_t seed, int n) {
  if (n < 1) throw std::invalid_argument("gen_unitary: n must be >= 1");
  Rng rng(mix_seed(0x0217a51ULL, seed));
  CMat g = gaussian_matrix(rng, n, n);
  Eigen::HouseholderQR<CMat> qr(g);
  CMat q = qr.householderQ();
  CMat r = qr.matrixQR().triangularView<Eigen::Upper>();
  // fix column phases so the distribution does not depend on QR sign choices
  for (int j = 0; j < n; ++j) {
    const Complex d = r(j, j);
    const double a = std::abs(d);
    q.col(j) *= (a > 0.0) ? d / a : Complex(1.0, 0.0);
  }
  return q;
}

ContractionPair gen_pair_with_gap(std::uint64_t seed, int n, double norm0, double gap,
                                  const SchattenOrder& p) {
  if (!(norm0 >= 0.0) || norm0 >= 1.0)
    throw std::invalid_argument("gen_pair_with_gap: norm0 must be in [0, 1)");
  if (!(gap > 0.0)) throw std::invalid_argument("gen_pair_with_gap: gap must be > 0");
  ContractionPair out{gen_contraction(mix_seed(seed, 1), n, norm0),
                      gen_contraction(mix_seed(seed, 1), n, norm0), false, 0.0};

  Rng rng(mix_seed(0x9a1cULL, seed));
  CMat dir = gaussian_matrix(rng, n, n);
  dir *= gap / schatten_norm(dir, p);

  const CMat& base = out.t0.mat();
  CMat cand = base + dir;
  if (operator_norm(cand) <= 1.0) {
    out.t1 = Contraction(cand);
  } else {
    // bisect the segment toward T0 until the endpoint is a contraction
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 80; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (operator_norm(base + mid * dir) <= 1.0 - 1e-14)
        lo = mid;
      else
        hi = mid;
    }
    out.t1 = Contraction(base + lo * dir);
    out.clipped = true;
  }
  out.achieved_gap = schatten_norm(out.t1.mat() - base, p);
  return out;
}

PsdPair gen_psd_pair(std::uint64_t seed, int n, double delta) {
  if (!(delta > 0.0) || delta >= 1.0)
    throw std::invalid_argument("gen_psd_pair: delta must be in (0, 1)");
  PsdPair out;
  Rng rng(mix_seed(0x95dULL, seed));
  const CMat va = gen_unitary(mix_seed(seed, 2), n);
  const CMat vb = gen_unitary(mix_seed(seed, 3), n);
  RVec ea(n), eb(n);
  for (int i = 0; i < n; ++i) ea(i) = rng.uniform();
  for (int i = 0; i < n; ++i) eb(i) = delta + (1.0 - delta) * rng.uniform();
  out.a = va * ea.asDiagonal() * va.adjoint();
  out.b = vb * eb.asDiagonal() * vb.adjoint();
  // symmetrize away the rounding from the two-sided products
  out.a = hermitize(out.a);
  out.b = hermitize(out.b);
  return out;
}

}  // namespace opcalc
