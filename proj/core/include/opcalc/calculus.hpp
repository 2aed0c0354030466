// calculus.hpp — contraction validation, defect operators, finite unitary
// power dilations, and the three functional-calculus paths (Fourier series,
// spectral, dilation-compression).

#pragma once

#include "opcalc/circle_function.hpp"
#include "opcalc/linalg.hpp"

namespace opcalc {

// ------------------------------ Contraction ---------------------------------

// Square matrix with ||T|| <= 1.  Inputs with norm in (1, 1 + 1e-10] are
// rescaled to norm exactly 1 and flagged; anything larger is rejected.
class Contraction {
 public:
  explicit Contraction(CMat t);

  const CMat& mat() const { return mat_; }
  int dim() const { return static_cast<int>(mat_.rows()); }
  double norm() const { return norm_; }
  double delta() const { return delta_; }  // (1 - ||T||^2)^{1/2}, 0 if norm >= 1
  bool is_strict() const { return norm_ < 1.0; }
  bool was_rescaled() const { return rescaled_; }

 private:
  CMat mat_;
  double norm_ = 0.0;
  double delta_ = 0.0;
  bool rescaled_ = false;
};

// ------------------------------ defects -------------------------------------

// D_T = (I - T*T)^{1/2}, D_T* = (I - TT*)^{1/2}.  Both roots come from one
// SVD of T, which keeps the intertwining identity T D_T = D_T* T at rounding
// level even when T is unitary or nearly so.
struct DefectPair {
  CMat d_t;
  CMat d_tstar;
};

DefectPair defects(const Contraction& t);

// ------------------------------ finite dilation -----------------------------

// Unitary on (N+1) copies of the base space whose compressions to the first
// block reproduce T^k for |k| <= N: first block column [T; D_T; 0; ...],
// last block column [D_T*; -T*; 0; ...], identity blocks shifting the
// interior.  (Truncating the one-sided shifts of the doubly-infinite form
// would destroy unitarity; this block form is unitary at every N.)
struct FiniteDilation {
  CMat u;
  int base_dim = 0;
  int valid_degree = 0;        // N
  int block_index_of_h = 0;    // the embedded copy of H is block 0
  double unitarity = 0.0;      // ||u*u - I||_inf certificate

  CMat compress(const CMat& big) const;      // top-left base_dim block
  CMat embed(const CMat& small) const;       // place an n x n block at (0, 0)
};

FiniteDilation finite_dilation(const Contraction& t, int n_degree);

// ------------------------------ calculus paths ------------------------------

struct CalcResult {
  CMat value;
  double err_bound = 0.0;  // sup-norm certificate carried by f (von Neumann)
};

// sum_{n<0} a_n (T*)^{|n|} + sum_{n>=0} a_n T^n
CalcResult calc_fourier(const CircleFunction& f, const Contraction& t);

// sum_j f(e^{i phase_j}) v_j v_j* for a unitary
CMat calc_spectral(const CircleFunction& f, const CMat& u, double tol = 1e-10);
CMat calc_spectral(const CircleFunction& f, const SpectralDecomp& d);

// compression of calc_spectral(f, dilation of T) back to the base block;
// requires degree(f) <= N
CalcResult calc_dilation(const CircleFunction& f, const Contraction& t, int n_degree);

}  // namespace opcalc
