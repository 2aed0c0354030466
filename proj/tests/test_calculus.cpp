#include "opcalc/calculus.hpp"

#include "opcalc/generators.hpp"
#include "opcalc/zoo.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <cmath>

using namespace opcalc;
using test::diag2;

TEST_CASE("Contraction validation") {
  CHECK_NOTHROW(Contraction(diag2(0.5, 0.9)));
  CHECK_THROWS_AS(Contraction(diag2(0.5, 1.5)), std::invalid_argument);
  CHECK_THROWS_AS(Contraction(CMat::Zero(2, 3)), std::invalid_argument);

  // norm in (1, 1+1e-10] rescales and flags
  Contraction t(diag2(1.0 + 5e-11, 0.2));
  CHECK(t.was_rescaled());
  CHECK(t.norm() == doctest::Approx(1.0));

  const Contraction s(diag2(0.6, 0.3));
  CHECK(s.delta() == doctest::Approx(std::sqrt(1.0 - 0.36)).epsilon(1e-12));
  CHECK(Contraction(diag2(1.0, 0.0)).delta() == 0.0);
}

TEST_CASE("defects: scalar and unitary cases") {
  const Contraction half(0.5 * CMat::Identity(1, 1));
  const DefectPair d = defects(half);
  CHECK(std::abs(d.d_t(0, 0) - std::sqrt(3.0) / 2.0) <= 1e-14);

  const CMat u = gen_unitary(3, 4);
  const DefectPair du = defects(Contraction(u));
  CHECK(operator_norm(du.d_t) <= 1e-11);
  CHECK(operator_norm(du.d_tstar) <= 1e-11);
}

TEST_CASE("defects satisfy the defining and intertwining identities") {
  for (std::uint64_t s = 0; s < 30; ++s) {
    const int n = 2 + static_cast<int>(s % 5);
    const Contraction t = gen_contraction(mix_seed(41, s), n, 0.6 + 0.4 * (s % 3) / 3.0);
    const DefectPair d = defects(t);
    const CMat i = CMat::Identity(n, n);
    CHECK(operator_norm(d.d_t * d.d_t + t.mat().adjoint() * t.mat() - i) <= 1e-10);
    CHECK(operator_norm(d.d_tstar * d.d_tstar + t.mat() * t.mat().adjoint() - i) <= 1e-10);
    CHECK(operator_norm(t.mat() * d.d_t - d.d_tstar * t.mat()) <= 1e-10);
    // PSD Hermitian
    CHECK(operator_norm(d.d_t - d.d_t.adjoint()) <= 1e-12);
    CHECK(herm_eig(d.d_t).evals(0) >= -1e-12);
  }
}

TEST_CASE("finite_dilation: one-step block rotation") {
  const Contraction t = gen_contraction(7, 3, 0.7);
  const DefectPair d = defects(t);
  const FiniteDilation fd = finite_dilation(t, 1);
  REQUIRE(fd.u.rows() == 6);
  CHECK(operator_norm(fd.u.block(0, 0, 3, 3) - t.mat()) == 0.0);
  CHECK(operator_norm(fd.u.block(0, 3, 3, 3) - d.d_tstar) == 0.0);
  CHECK(operator_norm(fd.u.block(3, 0, 3, 3) - d.d_t) == 0.0);
  CHECK(operator_norm(fd.u.block(3, 3, 3, 3) + t.mat().adjoint()) == 0.0);
  CHECK(fd.unitarity <= 1e-10);
}

TEST_CASE("finite_dilation reproduces powers up to N, both signs") {
  for (std::uint64_t s = 0; s < 12; ++s) {
    const int n = 2 + static_cast<int>(s % 3);
    const int deg = 3 + static_cast<int>(s % 6);
    const Contraction t = gen_contraction(mix_seed(43, s), n, 0.4 + 0.55 * (s % 4) / 4.0);
    const FiniteDilation fd = finite_dilation(t, deg);
    CHECK(fd.unitarity <= 1e-10);

    CMat upow = CMat::Identity(fd.u.rows(), fd.u.cols());
    CMat tpow = CMat::Identity(n, n);
    for (int k = 1; k <= deg; ++k) {
      upow = upow * fd.u;
      tpow = tpow * t.mat();
      CHECK(operator_norm(fd.compress(upow) - tpow) <= 1e-9);
      // negative powers are adjoints of positive ones for a unitary
      CHECK(operator_norm(fd.compress(upow.adjoint()) - tpow.adjoint()) <= 1e-9);
    }
  }
}

TEST_CASE("finite_dilation of a unitary keeps compressions exact") {
  const CMat u = gen_unitary(19, 4);
  const Contraction t(u);
  const FiniteDilation fd = finite_dilation(t, 6);
  CMat upow = CMat::Identity(fd.u.rows(), fd.u.cols());
  CMat tpow = CMat::Identity(4, 4);
  for (int k = 1; k <= 6; ++k) {
    upow = upow * fd.u;
    tpow = tpow * u;
    CHECK(operator_norm(fd.compress(upow) - tpow) <= 1e-11);
  }
}

TEST_CASE("calc_fourier on monomials and mixed polynomials") {
  const Contraction t = gen_contraction(53, 4, 0.8);
  CHECK(operator_norm(calc_fourier(zoo::by_id("z^1"), t).value - t.mat()) == 0.0);
  CHECK(operator_norm(calc_fourier(zoo::by_id("z^-1"), t).value - t.mat().adjoint()) == 0.0);

  const CircleFunction f = CircleFunction::from_map({{2, 1.0}, {-1, 1.0}});
  const CMat expect = t.mat() * t.mat() + t.mat().adjoint();
  CHECK(operator_norm(calc_fourier(f, t).value - expect) <= 1e-14);
}

TEST_CASE("calc_spectral agrees with calc_fourier on unitaries") {
  for (std::uint64_t s = 0; s < 8; ++s) {
    const CMat u = gen_unitary(mix_seed(61, s), 5);
    const Contraction tu(u);
    for (const std::string& id : {"z^2", "rand-1-d6", "saw~24"}) {
      const CircleFunction f = zoo::by_id(id);
      const CMat a = calc_spectral(f, u);
      const CMat b = calc_fourier(f, tu).value;
      CHECK(operator_norm(a - b) <= 1e-10);
    }
  }
  const CircleFunction g = zoo::by_id("rand-2-d12");
  CHECK(operator_norm(calc_spectral(g, CMat::Identity(3, 3)) -
                      g.eval(0.0) * CMat::Identity(3, 3)) <= 1e-12);
}

TEST_CASE("calc_dilation: dilation property and path agreement") {
  const Contraction t = gen_contraction(71, 4, 0.75);
  // z^k compresses to T^k
  CMat tpow = t.mat();
  for (int k = 1; k <= 4; ++k) {
    const CalcResult r = calc_dilation(CircleFunction::monomial(k), t, 6);
    CHECK(operator_norm(r.value - tpow) <= 1e-9);
    tpow = tpow * t.mat();
  }
  // constants compress to c I
  const CalcResult c = calc_dilation(CircleFunction::constant(Complex(0.3, -0.4)), t, 2);
  CHECK(operator_norm(c.value - Complex(0.3, -0.4) * CMat::Identity(4, 4)) <= 1e-10);

  // random polynomial, degree 6 under N = 8
  const CircleFunction f = zoo::by_id("rand-1-d6");
  const CMat a = calc_dilation(f, t, 8).value;
  const CMat b = calc_fourier(f, t).value;
  CHECK(operator_norm(a - b) <= 1e-9);

  CHECK_THROWS_AS(calc_dilation(zoo::by_id("rand-2-d12"), t, 8), std::invalid_argument);
}

TEST_CASE("von Neumann inequality for the Fourier path") {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const int n = 2 + static_cast<int>(s % 4);
    const Contraction t = gen_contraction(mix_seed(73, s), n, 0.3 + 0.7 * (s % 5) / 5.0);
    for (const std::string& id : {"z^3", "rand-1-d6", "rand-2-d12", "|Im|~24"}) {
      const CircleFunction f = zoo::by_id(id);
      const double lhs = operator_norm(calc_fourier(f, t).value);
      const double sup = sup_abs(f);
      INFO("f = ", id);
      CHECK(lhs <= sup * (1.0 + 1e-8));
    }
  }
}

TEST_CASE("calculus is linear but not multiplicative") {
  const Contraction t = gen_contraction(79, 3, 0.6);
  const CircleFunction f = zoo::by_id("rand-1-d6");
  const CircleFunction g = zoo::by_id("rand-2-d12");
  const Complex a(1.5, -0.5), b(0.25, 2.0);

  const CMat lhs = calc_fourier(f.scaled(a).plus(g.scaled(b)), t).value;
  const CMat rhs = a * calc_fourier(f, t).value + b * calc_fourier(g, t).value;
  CHECK(operator_norm(lhs - rhs) <= 1e-10);

  // (f g)(T) != f(T) g(T) in general: f = z, g = conj(z) gives
  // (fg)(T) = I while f(T) g(T) = T T*, and I - T T* = D_{T*}^2 != 0
  const CMat tt = t.mat() * t.mat().adjoint();
  const double witness = operator_norm(CMat::Identity(3, 3) - tt);
  CHECK(witness > 0.1);
}
