// bounds.hpp — inequality checkers: the Riemann-Bochner integral identity
// for A - B, the defect-difference and dilation-difference bounds with their
// explicit constants, coefficient-series and strict-pair estimates, and
// ratio records for the constants the theory leaves implicit.

#pragma once

#include "opcalc/calculus.hpp"
#include "opcalc/circle_function.hpp"
#include "opcalc/linalg.hpp"

#include <string>

namespace opcalc {

// Uniform carrier for one inequality instance.  A check passes when
// slack >= -1e-9 * max(1, rhs).
struct BoundReport {
  double lhs = 0.0;
  double rhs = 0.0;
  double constant_used = 0.0;
  double slack = 0.0;  // rhs - lhs
  double p = 0.0;      // inf for the operator norm
  std::string f_id;
  std::string instance_id;

  bool pass(double abs_tol_scale = 1e-9) const {
    return slack >= -abs_tol_scale * std::max(1.0, rhs);
  }
};

BoundReport make_report(double lhs, double rhs, double constant_used,
                        const SchattenOrder& p);

// ------------------------------ quadrature ----------------------------------

struct QuadConfig {
  int points = 16;            // Gauss-Legendre points per panel
  int max_depth = 30;
  double rel_tol = 1e-9;      // target relative to ||A - B||_F
  double t_max_factor = 40.0; // T_max = max(factor / delta, factor)
  int fixed_panels = 0;       // > 0 disables adaptivity (uniform panels)
};

struct QuadResult {
  CMat value;
  double quad_err = 0.0;  // panel error estimates + analytic tail bound
  double tail_bound = 0.0;
  int evaluations = 0;
};

// int_0^Tmax e^{-tA} (A^2 - B^2) e^{-tB} dt for PSD contractions A, B with
// B >= delta I > 0; equals A - B up to the certified tail.  The integrand is
// evaluated in the fixed eigenbases of A and B, so each point costs O(n^2).
QuadResult exp_integral_diff(const CMat& a, const CMat& b, double delta,
                             const QuadConfig& quad = QuadConfig{});

// ||A - B||_p <= (1/delta) ||A^2 - B^2||_p
BoundReport sqrt_lipschitz_check(const CMat& a, const CMat& b, double delta,
                                 const SchattenOrder& p);

// ------------------------------ defect & dilation ---------------------------

// ||D_{T1} - D_{T0}||_p <= (2/delta) ||T1 - T0||_p, same for the adjoint
// defects; the factor 2 comes from ||T1*T1 - T0*T0||_p <= 2 ||T1 - T0||_p,
// which is asserted alongside.
struct DefectDiffReport {
  BoundReport d;
  BoundReport d_star;
  BoundReport squares;  // the factor-2 contractivity step
};

DefectDiffReport defect_diff_check(const Contraction& t0, const Contraction& t1,
                                   const SchattenOrder& p);

// ||U_{T1} - U_{T0}||_p <= 2^{1/p} (2 + delta)/delta ||T1 - T0||_p on finite
// dilations of matching degree; the two-term split of the difference is
// recorded alongside the main report.
struct DilationDiffReport {
  BoundReport report;
  double split_shift_norm = 0.0;   // blocks carrying T1-T0 and its adjoint
  double split_defect_norm = 0.0;  // blocks carrying the defect differences
};

double dilation_diff_constant(double delta, const SchattenOrder& p);

DilationDiffReport dilation_diff_check(const Contraction& t0, const Contraction& t1,
                                       int n_degree, const SchattenOrder& p);

// ------------------------------ function estimates --------------------------

// ||f(T1) - f(T0)||_p <= (sum_{n != 0} |n f_hat(n)|) ||T1 - T0||_p
BoundReport series_bound_check(const CircleFunction& f, const Contraction& t0,
                               const Contraction& t1, const SchattenOrder& p);

// strict pairs: constant sqrt(2) ||f||_Lip(T) (1 - max norm^2)^{-1/2}
BoundReport strict_pair_check(const CircleFunction& f, const Contraction& t0,
                              const Contraction& t1, const SchattenOrder& p);

// d_p-free p = 2 chain for strict T0:
// ||f(T1)-f(T0)||_2 <= sqrt(2) (2+delta)/delta ||f||_Lip(T) ||T1-T0||_2
BoundReport p2_chain_check(const CircleFunction& f, const Contraction& t0,
                           const Contraction& t1);

// ------------------------------ ratio records -------------------------------

// Measurement-only record: the constants d_p (and c_p behind it) are not
// explicit, so ratios are reported against the explicit envelope shapes and
// never asserted.
struct RatioRecord {
  double ratio = 0.0;        // ||df||_p / (lip_arc(f) ||dT||_p)
  double ratio_mixed = 0.0;  // vs max{||dT||_p, ||dT||_{p/2}^{1/2}}
  double p = 0.0;
  double delta = 0.0;            // strictness margin of T0
  double envelope = 0.0;         // 2^{1/p} (2+delta)/delta
  double k_p = 0.0;              // 2^{1/p}(1+sqrt 2) for p>=2, 2^{1/p}(1+2^{2/p}) below
  double lhs = 0.0;              // ||f(T1)-f(T0)||_p
  double gap_p = 0.0;            // ||T1-T0||_p
  std::string f_id;
  std::string instance_id;
};

RatioRecord lipschitz_ratio(const CircleFunction& f, const Contraction& t0,
                            const Contraction& t1, const SchattenOrder& p,
                            int n_degree);

}  // namespace opcalc
