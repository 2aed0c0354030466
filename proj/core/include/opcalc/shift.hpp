// shift.hpp — spectral shift recovery: trace moments of a contraction pair,
// Fourier inversion into a trigonometric-polynomial shift function, and the
// trace-formula residual check.

#pragma once

#include "opcalc/calculus.hpp"
#include "opcalc/circle_function.hpp"
#include "opcalc/linalg.hpp"

#include <string>
#include <vector>

namespace opcalc {

// Trig-polynomial representative of the shift function: coefficients
// c(n) = int_0^{2pi} e^{int} eta(t) dt for 0 < |n| <= N, constant term fixed
// to 0 (the additive-constant gauge).
class ShiftFunction {
 public:
  ShiftFunction(int n_max, std::vector<Complex> coeffs);  // coeffs for n = -N..N, c(0) ignored

  int n_max() const { return n_max_; }
  Complex coeff(int n) const;         // c(n), 0 for n = 0 or |n| > N
  Complex eval(double t) const;       // eta_N(t) = (1/2pi) sum c(n) e^{-int}
  double l1_grid_norm(int grid = 4096) const;

 private:
  int n_max_;
  std::vector<Complex> coeffs_;
};

// Tr[(T1^(n) - T0^(n)) X] with T^(n) = T^n for n > 0 and (T*)^{|n|} for n < 0;
// n = 0 is rejected (constants cancel in the difference).
Complex moment(const Contraction& t0, const Contraction& t1, const CMat& x, int n);

enum class EtaRoute {
  kMoments,   // directly from contraction moments
  kDilation,  // through compressions of a finite dilation pair (cross-check)
};

// c(n) = moment(n) / (i n) for 0 < |n| <= N
ShiftFunction eta_recover(const Contraction& t0, const Contraction& t1, const CMat& x,
                          int n_max, EtaRoute route = EtaRoute::kMoments);

// | Tr[(f(T1)-f(T0)) X] - int_0^{2pi} (d/dt) f(e^{it}) eta_N(t) dt |, the
// integral evaluated exactly by Fourier orthogonality.  Requires
// degree(f) <= eta.n_max().
double trace_formula_check(const CircleFunction& f, const Contraction& t0,
                           const Contraction& t1, const CMat& x,
                           const ShiftFunction& eta);

// max coefficient deviation between two recoveries at the same N
double uniqueness_check(const ShiftFunction& eta1, const ShiftFunction& eta2);

// JSON {"N": N, "coeffs": {"n": [re, im]}}
std::string shift_to_json(const ShiftFunction& eta);
ShiftFunction shift_from_json(const std::string& text);

// plot-ready two-column text (t, Re eta) / (t, Im eta) on a uniform grid
std::string shift_plot_data(const ShiftFunction& eta, bool imag_part,
                            int grid = 1024);

}  // namespace opcalc
