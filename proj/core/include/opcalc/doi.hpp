// doi.hpp — double operator integrals over finite spectral decompositions:
// T_Phi(X) = sum_{j,k} Phi(l_j, m_k) P_j X Q_k, symbol algebra checks, and
// the Birman-Solomyak representation of f(U) - f(V).

#pragma once

#include "opcalc/calculus.hpp"
#include "opcalc/circle_function.hpp"
#include "opcalc/linalg.hpp"

#include <functional>

namespace opcalc {

// Bounded symbol on products of spectra.  |evaluator| must stay within
// sup_bound on every spectral pair actually used; doi_apply checks this.
struct DoiSymbol {
  std::function<Complex(double, double)> evaluator;
  double sup_bound = 0.0;
  std::string id;
};

DoiSymbol product_symbol(std::function<Complex(double)> phi1,
                         std::function<Complex(double)> phi2, double bound);

// divided-difference symbol h^[1] of f with the 0-on-diagonal convention;
// sup_bound is the certified chordal Lipschitz seminorm
DoiSymbol dd_symbol(const CircleFunction& f, double diag_tol = 1e-12);

// Spectral pairs with chord gap inside (warn_lo, warn_hi) are exact either
// way (the prefactor vanishes on the diagonal) but sit close to the h^[1]
// cutoff; doi_apply counts them so campaigns can record a warning.
struct DoiStats {
  int near_diagonal_pairs = 0;
};

CMat doi_apply(const DoiSymbol& phi, const SpectralDecomp& e, const SpectralDecomp& f,
               const CMat& x, DoiStats* stats = nullptr);

// f(U) - f(V) as T_{h^[1]}(U - V); exact for trig polynomials at finite
// dimension
CMat birman_solomyak_delta(const CircleFunction& f, const CMat& u, const CMat& v,
                           DoiStats* stats = nullptr);

// || f(U) X - X f(V) - T_{h^[1]}(U X - X V) ||_2
double commutator_identity_check(const CircleFunction& f, const CMat& u, const CMat& v,
                                 const CMat& x);

// residuals of T_{a Phi + b Psi} = a T_Phi + b T_Psi and T_{Phi Psi} = T_Phi T_Psi
struct DoiAlgebraResidual {
  double linearity = 0.0;
  double multiplicativity = 0.0;
};

DoiAlgebraResidual doi_algebra_check(const SpectralDecomp& e, const SpectralDecomp& f,
                                     const DoiSymbol& phi, const DoiSymbol& psi,
                                     const CMat& x, Complex alpha = Complex(0.7, 0.2),
                                     Complex beta = Complex(-0.3, 0.5));

}  // namespace opcalc
