#include "opcalc/linalg.hpp"

#include "opcalc/generators.hpp"
#include "opcalc/matrix_io.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <cmath>

using namespace opcalc;
using test::cdiag;
using test::diag2;

TEST_CASE("schatten_norm on diag(3,4)") {
  const CMat m = diag2(3.0, 4.0);
  CHECK(schatten_norm(m, SchattenOrder(2.0)) == doctest::Approx(5.0).epsilon(1e-12));
  CHECK(schatten_norm(m, SchattenOrder(1.0)) == doctest::Approx(7.0).epsilon(1e-12));
  CHECK(schatten_norm(m, SchattenOrder::inf()) == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("schatten_norm rejects bad input") {
  CHECK_THROWS_AS(SchattenOrder(0.5), std::invalid_argument);
  CMat m = diag2(1.0, 1.0);
  m(0, 1) = Complex(std::numeric_limits<double>::quiet_NaN(), 0.0);
  CHECK_THROWS_AS(schatten_norm(m, SchattenOrder(2.0)), std::invalid_argument);
}

TEST_CASE("schatten_norm is unitarily invariant") {
  for (std::uint64_t s = 0; s < 20; ++s) {
    Rng rng(mix_seed(11, s));
    const int n = 3 + static_cast<int>(s % 4);
    const CMat m = gaussian_matrix(rng, n, n);
    const CMat u = gen_unitary(mix_seed(s, 1), n);
    const CMat w = gen_unitary(mix_seed(s, 2), n);
    for (double p : {1.0, 1.7, 2.0, 3.0}) {
      const double a = schatten_norm(u * m * w, SchattenOrder(p));
      const double b = schatten_norm(m, SchattenOrder(p));
      CHECK(std::abs(a - b) <= 1e-10 * b);
    }
  }
}

TEST_CASE("schatten norms: Hoelder and p-monotonicity") {
  for (std::uint64_t s = 0; s < 20; ++s) {
    Rng rng(mix_seed(13, s));
    const CMat a = gaussian_matrix(rng, 5, 5);
    const CMat b = gaussian_matrix(rng, 5, 5);
    const double lhs = schatten_norm(a * b, SchattenOrder(1.0));
    const double rhs =
        schatten_norm(a, SchattenOrder(2.0)) * schatten_norm(b, SchattenOrder(2.0));
    CHECK(lhs <= rhs + 1e-10);

    for (auto [p, q] : {std::pair{1.0, 2.0}, {1.5, 3.0}, {2.0, 5.0}}) {
      CHECK(schatten_norm(a, SchattenOrder(q)) <= schatten_norm(a, SchattenOrder(p)) + 1e-10);
    }
    CHECK(schatten_norm(a, SchattenOrder::inf()) <=
          schatten_norm(a, SchattenOrder(3.0)) + 1e-10);
  }
}

TEST_CASE("herm_eig basics") {
  CMat x = CMat::Zero(2, 2);
  x(0, 1) = 1.0;
  x(1, 0) = 1.0;
  const HermEig e = herm_eig(x);
  CHECK(e.evals(0) == doctest::Approx(-1.0));
  CHECK(e.evals(1) == doctest::Approx(1.0));

  const HermEig id = herm_eig(CMat::Identity(4, 4));
  for (int i = 0; i < 4; ++i) CHECK(id.evals(i) == doctest::Approx(1.0));

  CMat g = test::random_hermitian(77, 5);
  const HermEig eg = herm_eig(g);
  const CMat rec = eg.evecs * eg.evals.asDiagonal() * eg.evecs.adjoint();
  CHECK(operator_norm(rec - g) <= 1e-12 * operator_norm(g));
}

TEST_CASE("herm_eig rejects non-Hermitian input") {
  CMat x = CMat::Zero(2, 2);
  x(0, 1) = 1.0;  // strictly upper, far from Hermitian
  CHECK_THROWS_AS(herm_eig(x), std::invalid_argument);
}

TEST_CASE("psd_sqrt") {
  CHECK(operator_norm(psd_sqrt(diag2(4.0, 9.0)) - diag2(2.0, 3.0)) <= 1e-12);
  CHECK(operator_norm(psd_sqrt(CMat::Zero(3, 3))) == 0.0);

  // squaring oracle on a random PSD matrix
  Rng rng(99);
  const CMat g = gaussian_matrix(rng, 6, 6);
  const CMat h = hermitize(g * g.adjoint());
  const CMat s = psd_sqrt(h);
  CHECK(schatten_norm(s * s - h, SchattenOrder(2.0)) <=
        1e-11 * schatten_norm(h, SchattenOrder(2.0)));
  // idempotence of the contract: sqrt(S^2) = S
  CHECK(operator_norm(psd_sqrt(s * s) - s) <= 1e-9 * operator_norm(s));

  CMat neg = diag2(1.0, -0.5);
  CHECK_THROWS_AS(psd_sqrt(neg), std::invalid_argument);
}

TEST_CASE("unitary_eig on exact cases") {
  const SpectralDecomp id = unitary_eig(CMat::Identity(3, 3));
  CHECK(id.groups.size() == 1);
  CHECK(id.groups[0].phase == doctest::Approx(0.0));
  CHECK(operator_norm(id.projector(0) - CMat::Identity(3, 3)) <= 1e-12);

  const SpectralDecomp d = unitary_eig(cdiag({1.0, Complex(0.0, 1.0)}));
  REQUIRE(d.groups.size() == 2);
  CHECK(d.groups[0].phase == doctest::Approx(0.0));
  CHECK(d.groups[1].phase == doctest::Approx(std::numbers::pi / 2));
}

TEST_CASE("unitary_eig resolution of identity on random unitaries") {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const int n = 8;
    const CMat u = gen_unitary(mix_seed(21, s), n);
    const SpectralDecomp d = unitary_eig(u);
    CHECK(spectral_residual(u, d) <= 1e-11);

    CMat sum = CMat::Zero(n, n);
    for (int g = 0; g < static_cast<int>(d.groups.size()); ++g) {
      const CMat pg = d.projector(g);
      sum += pg;
      for (int h = 0; h < static_cast<int>(d.groups.size()); ++h) {
        const CMat ph = d.projector(h);
        const CMat prod = pg * ph;
        if (g == h)
          CHECK(operator_norm(prod - pg) <= 1e-10);
        else
          CHECK(operator_norm(prod) <= 1e-10);
      }
    }
    CHECK(operator_norm(sum - CMat::Identity(n, n)) <= 1e-10);
  }
}

TEST_CASE("unitary_eig groups clustered phases") {
  // two phases 1e-10 apart must land in one group at the default tolerance
  const double t = 1.3;
  const CMat u = cdiag({std::polar(1.0, t), std::polar(1.0, t + 1e-10), std::polar(1.0, 3.0)});
  const SpectralDecomp d = unitary_eig(u);
  CHECK(d.groups.size() == 2);

  // wrap-around: phases straddling 0 and 2pi merge circularly
  const CMat w = cdiag({std::polar(1.0, 1e-10), std::polar(1.0, 2 * std::numbers::pi - 1e-10)});
  const SpectralDecomp dw = unitary_eig(w);
  CHECK(dw.groups.size() == 1);
}

TEST_CASE("unitary_eig rejects non-unitary input") {
  CHECK_THROWS_AS(unitary_eig(diag2(0.5, 1.0)), std::invalid_argument);
  CHECK_THROWS_AS(unitary_eig(CMat(0, 0)), std::invalid_argument);
}

TEST_CASE("matrix json round-trip is bit-exact") {
  Rng rng(4242);
  CMat m = gaussian_matrix(rng, 4, 3);
  m(0, 0) = Complex(0.1, -1.0 / 3.0);
  m(1, 2) = Complex(1e-300, 1e300);
  const CMat back = matrix_from_json(matrix_to_json(m));
  REQUIRE(back.rows() == m.rows());
  REQUIRE(back.cols() == m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) {
      CHECK(back(i, j).real() == m(i, j).real());
      CHECK(back(i, j).imag() == m(i, j).imag());
    }
}

TEST_CASE("matrix json rejects malformed input") {
  CHECK_THROWS(matrix_from_json("{\"rows\": 2, \"cols\": 2, \"entries\": [[1, 0]]}"));
  CHECK_THROWS(matrix_from_json("{\"rows\": 0, \"cols\": 1, \"entries\": []}"));
}
