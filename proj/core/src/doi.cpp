#include "opcalc/doi.hpp"

#include <cmath>

namespace opcalc {

DoiSymbol product_symbol(std::function<Complex(double)> phi1,
                         std::function<Complex(double)> phi2, double bound) {
  DoiSymbol s;
  s.evaluator = [p1 = std::move(phi1), p2 = std::move(phi2)](double l, double m) {
    return p1(l) * p2(m);
  };
  s.sup_bound = bound;
  s.id = "product";
  return s;
}

DoiSymbol dd_symbol(const CircleFunction& f, double diag_tol) {
  DoiSymbol s;
  s.evaluator = [f, diag_tol](double l, double m) {
    return divided_difference(f, l, m, diag_tol);
  };
  s.sup_bound = lip_chordal(f);
  s.id = f.id.empty() ? "h1" : "h1[" + f.id + "]";
  return s;
}

CMat doi_apply(const DoiSymbol& phi, const SpectralDecomp& e, const SpectralDecomp& f,
               const CMat& x, DoiStats* stats) {
  if (!phi.evaluator) throw std::invalid_argument("doi_apply: symbol has no evaluator");
  if (x.rows() != e.dim() || x.cols() != f.dim())
    throw std::invalid_argument("doi_apply: dimension mismatch");

  // Scale the group blocks of V* X W by the symbol values; every entry is
  // touched exactly once, so the result is independent of any evaluation
  // order by construction.
  CMat y = e.basis.adjoint() * x * f.basis;
  for (const SpectralGroup& a : e.groups) {
    for (const SpectralGroup& b : f.groups) {
      const Complex v = phi.evaluator(a.phase, b.phase);
      if (std::abs(v) > phi.sup_bound * (1.0 + 1e-9) + 1e-15)
        throw std::invalid_argument("doi_apply: symbol exceeds its sup_bound certificate");
      y.block(a.start, b.start, a.size, b.size) *= v;
      if (stats) {
        const double chord =
            std::abs(std::polar(1.0, a.phase) - std::polar(1.0, b.phase));
        if (chord > 1e-12 && chord <= 1e-8) ++stats->near_diagonal_pairs;
      }
    }
  }
  return e.basis * y * f.basis.adjoint();
}

CMat birman_solomyak_delta(const CircleFunction& f, const CMat& u, const CMat& v,
                           DoiStats* stats) {
  const SpectralDecomp e = unitary_eig(u);
  const SpectralDecomp ff = unitary_eig(v);
  const DoiSymbol h = dd_symbol(f);
  return doi_apply(h, e, ff, u - v, stats);
}

double commutator_identity_check(const CircleFunction& f, const CMat& u, const CMat& v,
                                 const CMat& x) {
  const SpectralDecomp e = unitary_eig(u);
  const SpectralDecomp ff = unitary_eig(v);
  const CMat lhs = calc_spectral(f, e) * x - x * calc_spectral(f, ff);
  const CMat rhs = doi_apply(dd_symbol(f), e, ff, u * x - x * v);
  return (lhs - rhs).norm();
}

DoiAlgebraResidual doi_algebra_check(const SpectralDecomp& e, const SpectralDecomp& f,
                                     const DoiSymbol& phi, const DoiSymbol& psi,
                                     const CMat& x, Complex alpha, Complex beta) {
  DoiSymbol combo;
  combo.evaluator = [&phi, &psi, alpha, beta](double l, double m) {
    return alpha * phi.evaluator(l, m) + beta * psi.evaluator(l, m);
  };
  combo.sup_bound = std::abs(alpha) * phi.sup_bound + std::abs(beta) * psi.sup_bound;

  DoiSymbol prod;
  prod.evaluator = [&phi, &psi](double l, double m) {
    return phi.evaluator(l, m) * psi.evaluator(l, m);
  };
  prod.sup_bound = phi.sup_bound * psi.sup_bound;

  DoiAlgebraResidual r;
  const CMat lin_lhs = doi_apply(combo, e, f, x);
  const CMat lin_rhs = alpha * doi_apply(phi, e, f, x) + beta * doi_apply(psi, e, f, x);
  r.linearity = (lin_lhs - lin_rhs).norm();

  const CMat mul_lhs = doi_apply(prod, e, f, x);
  const CMat mul_rhs = doi_apply(phi, e, f, doi_apply(psi, e, f, x));
  r.multiplicativity = (mul_lhs - mul_rhs).norm();
  return r;
}

}  // namespace opcalc
