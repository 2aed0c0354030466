#include "opcalc/doi.hpp"

#include "opcalc/generators.hpp"
#include "opcalc/zoo.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <cmath>

using namespace opcalc;

namespace {

std::vector<CircleFunction> poly_zoo() {
  std::vector<CircleFunction> fns;
  for (const std::string& id : zoo::default_ids(24)) fns.push_back(zoo::by_id(id));
  return fns;
}

DoiSymbol const_symbol(Complex c) {
  DoiSymbol s;
  s.evaluator = [c](double, double) { return c; };
  s.sup_bound = std::abs(c);
  return s;
}

}  // namespace

TEST_CASE("doi_apply with the constant symbol is the identity") {
  const CMat u = gen_unitary(101, 5);
  const CMat v = gen_unitary(102, 5);
  Rng rng(103);
  const CMat x = gaussian_matrix(rng, 5, 5);
  const CMat y = doi_apply(const_symbol(1.0), unitary_eig(u), unitary_eig(v), x);
  CHECK((y - x).norm() <= 1e-12 * x.norm());
}

TEST_CASE("doi_apply with product symbols multiplies by the operators") {
  const CMat u = gen_unitary(111, 5);
  const CMat v = gen_unitary(112, 5);
  Rng rng(113);
  const CMat x = gaussian_matrix(rng, 5, 5);
  const SpectralDecomp e = unitary_eig(u);
  const SpectralDecomp f = unitary_eig(v);

  // phi(l, m) = e^{il}: left multiplication by U
  const DoiSymbol left = product_symbol([](double l) { return std::polar(1.0, l); },
                                        [](double) { return Complex(1.0, 0.0); }, 1.0);
  CHECK((doi_apply(left, e, f, x) - u * x).norm() <= 1e-10 * x.norm());

  // phi(l, m) = e^{il} e^{-im}: U X V*
  const DoiSymbol both = product_symbol([](double l) { return std::polar(1.0, l); },
                                        [](double m) { return std::polar(1.0, -m); }, 1.0);
  CHECK((doi_apply(both, e, f, x) - u * x * v.adjoint()).norm() <= 1e-10 * x.norm());
}

TEST_CASE("doi_apply enforces the symbol certificate and dimensions") {
  const CMat u = gen_unitary(121, 4);
  const SpectralDecomp e = unitary_eig(u);
  Rng rng(122);
  const CMat x = gaussian_matrix(rng, 4, 4);

  DoiSymbol lying = const_symbol(2.0);
  lying.sup_bound = 1.0;
  CHECK_THROWS_AS(doi_apply(lying, e, e, x), std::invalid_argument);

  const CMat bad = gaussian_matrix(rng, 3, 4);
  CHECK_THROWS_AS(doi_apply(const_symbol(1.0), e, e, bad), std::invalid_argument);
}

TEST_CASE("Hilbert-Schmidt contraction of the double operator integral") {
  Rng srng(131);
  for (std::uint64_t s = 0; s < 50; ++s) {
    const int n = 3 + static_cast<int>(s % 4);
    const CMat u = gen_unitary(mix_seed(132, s), n);
    const CMat v = gen_unitary(mix_seed(133, s), n);
    Rng rng(mix_seed(134, s));
    const CMat x = gaussian_matrix(rng, n, n);
    // random bounded symbol with a computable sup certificate
    const Complex q0 = srng.cnormal(), q1 = srng.cnormal();
    DoiSymbol phi;
    phi.evaluator = [q0, q1](double l, double m) {
      return q0 + q1 * std::polar(1.0, l - 2.0 * m);
    };
    phi.sup_bound = std::abs(q0) + std::abs(q1);
    const CMat y = doi_apply(phi, unitary_eig(u), unitary_eig(v), x);
    CHECK(y.norm() <= phi.sup_bound * x.norm() * (1.0 + 1e-10));
  }
}

TEST_CASE("birman_solomyak_delta: trivial cases") {
  const CMat u = gen_unitary(141, 5);
  const CircleFunction z = zoo::by_id("z^1");
  // U = V: difference of equal operators
  CHECK(birman_solomyak_delta(z, u, u).norm() <= 1e-12);
  // f = z: h is identically 1, so the delta is U - V
  const CMat v = gen_unitary(142, 5);
  CHECK((birman_solomyak_delta(z, u, v) - (u - v)).norm() <= 1e-10);
}

TEST_CASE("birman_solomyak_delta equals the spectral-calculus difference") {
  const CircleFunction f = CircleFunction::from_map({{3, 1.0}, {-2, 1.0}});
  for (std::uint64_t s = 0; s < 25; ++s) {
    const int n = 6;
    const CMat u = gen_unitary(mix_seed(151, s), n);
    const CMat v = gen_unitary(mix_seed(152, s), n);
    const CMat lhs = birman_solomyak_delta(f, u, v);
    const CMat rhs = calc_spectral(f, u) - calc_spectral(f, v);
    CHECK((lhs - rhs).norm() <= 1e-9);
  }
}

TEST_CASE("birman_solomyak_delta over the zoo") {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const int n = 4 + static_cast<int>(s % 5);
    const CMat u = gen_unitary(mix_seed(153, s), n);
    const CMat v = gen_unitary(mix_seed(154, s), n);
    for (const CircleFunction& f : poly_zoo()) {
      const CMat lhs = birman_solomyak_delta(f, u, v);
      const CMat rhs = calc_spectral(f, u) - calc_spectral(f, v);
      INFO("f = ", f.id);
      CHECK((lhs - rhs).norm() <= 1e-9);
    }
  }
}

TEST_CASE("commutator identity") {
  const CMat u = gen_unitary(161, 5);
  const CMat v = gen_unitary(162, 5);
  Rng rng(163);
  const CMat x = gaussian_matrix(rng, 5, 5);

  // X = 0 and f = z are exact by construction
  CHECK(commutator_identity_check(zoo::by_id("z^1"), u, v, CMat::Zero(5, 5)) == 0.0);
  CHECK(commutator_identity_check(zoo::by_id("z^1"), u, v, x) <= 1e-12 * x.norm());

  for (const CircleFunction& f : poly_zoo()) {
    INFO("f = ", f.id);
    CHECK(commutator_identity_check(f, u, v, x) <= 1e-9 * (1.0 + x.norm()));
  }
}

TEST_CASE("commutator identity for the truncated |Im z| at higher degree") {
  const CircleFunction f = zoo::abs_im_truncated(64);
  const CMat u = gen_unitary(171, 5);
  const CMat v = gen_unitary(172, 5);
  Rng rng(173);
  const CMat x = gaussian_matrix(rng, 5, 5);
  CHECK(commutator_identity_check(f, u, v, x) <= 1e-9 * (1.0 + x.norm()));
}

TEST_CASE("doi symbol algebra: linearity and multiplicativity") {
  // constant symbols are exact
  {
    const CMat u = gen_unitary(181, 4);
    const SpectralDecomp e = unitary_eig(u);
    Rng rng(182);
    const CMat x = gaussian_matrix(rng, 4, 4);
    const DoiAlgebraResidual r =
        doi_algebra_check(e, e, const_symbol(1.0), const_symbol(1.0), x);
    CHECK(r.linearity <= 1e-13 * x.norm());
    CHECK(r.multiplicativity <= 1e-13 * x.norm());
  }

  for (std::uint64_t s = 0; s < 25; ++s) {
    const int n = 4;
    const CMat u = gen_unitary(mix_seed(183, s), n);
    const CMat v = gen_unitary(mix_seed(184, s), n);
    Rng rng(mix_seed(185, s));
    const CMat x = gaussian_matrix(rng, n, n);
    Rng srng(mix_seed(186, s));
    const Complex a = srng.cnormal(), b = srng.cnormal(), c = srng.cnormal(), d = srng.cnormal();
    DoiSymbol phi, psi;
    phi.evaluator = [a, b](double l, double m) { return a + b * std::polar(1.0, l + m); };
    phi.sup_bound = std::abs(a) + std::abs(b);
    psi.evaluator = [c, d](double l, double m) { return c + d * std::polar(1.0, 2.0 * l - m); };
    psi.sup_bound = std::abs(c) + std::abs(d);
    const DoiAlgebraResidual r = doi_algebra_check(unitary_eig(u), unitary_eig(v), phi, psi, x);
    CHECK(r.linearity <= 1e-10 * std::max(1.0, x.norm()));
    CHECK(r.multiplicativity <= 1e-10 * std::max(1.0, x.norm()));
  }
}

TEST_CASE("near-diagonal spectral pairs are counted") {
  // two unitaries sharing an eigenvalue up to 1e-9 across spectra
  const CMat u = test::cdiag({std::polar(1.0, 1.0), std::polar(1.0, 2.0)});
  const CMat v = test::cdiag({std::polar(1.0, 1.0 + 1e-9), std::polar(1.0, 4.0)});
  DoiStats stats;
  birman_solomyak_delta(zoo::by_id("z^2"), u, v, &stats);
  CHECK(stats.near_diagonal_pairs >= 1);
}
