// linalg.hpp — dense complex matrix kernel: Schatten norms, Hermitian
// eigensolves, PSD square roots, spectral decomposition of unitaries.

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <limits>
#include <stdexcept>
#include <vector>

namespace opcalc {

using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;
using Complex = std::complex<double>;

// ------------------------------ SchattenOrder -------------------------------

// Schatten index p in [1, inf]; p = inf is the operator norm.
class SchattenOrder {
 public:
  explicit SchattenOrder(double p) : p_(p) {
    if (!(p >= 1.0)) throw std::invalid_argument("SchattenOrder: p must be >= 1");
  }
  static SchattenOrder inf() {
    return SchattenOrder(std::numeric_limits<double>::infinity());
  }
  double value() const { return p_; }
  bool is_inf() const { return std::isinf(p_); }

 private:
  double p_;
};

// ------------------------------ basic helpers -------------------------------

bool all_finite(const CMat& m);
void require_finite(const CMat& m, const char* who);

inline CMat hermitize(const CMat& a) { return 0.5 * (a + a.adjoint()); }

double max_abs(const CMat& a);

// singular values, descending (LAPACK/Eigen convention)
RVec singular_values(const CMat& m);

double operator_norm(const CMat& m);  // largest singular value

// (sum sigma_i^p)^{1/p}; p = inf gives the largest singular value.
// Rejects non-finite entries. For p < 1.5, singular values below
// 1e-14 * sigma_max count as exact zeros.
double schatten_norm(const CMat& m, const SchattenOrder& p);

// Schatten quasi-norm for q in (0, 1); used only for the mixed-norm
// ratio records (it is not a norm and stays out of schatten_norm's contract).
double schatten_quasi_norm(const CMat& m, double q);

// ------------------------------ Hermitian eig -------------------------------

struct HermEig {
  RVec evals;  // ascending
  CMat evecs;  // unitary, columns are eigenvectors
};

// Rejects inputs with ||H - H*|| > tol * ||H||; always symmetrizes before
// solving so numerically-Hermitian inputs are total.
HermEig herm_eig(const CMat& h, double tol = 1e-10);

// PSD square root via herm_eig; eigenvalues in [-tol, 0) clamp to 0,
// anything below -tol is rejected as non-PSD.
CMat psd_sqrt(const CMat& h, double tol = 1e-10);

// Hermitian matrix exponential e^{sH} (s real), via herm_eig.
CMat herm_exp(const CMat& h, double s, double tol = 1e-10);

// ------------------------------ unitary eig ---------------------------------

// Finite-dimensional spectral decomposition of a unitary.  `basis` is an
// orthonormal eigenbasis, `phases[j]` in [0, 2pi) belongs to column j
// (sorted ascending).  Groups merge columns whose phases sit within the
// grouping tolerance (circularly), so downstream double operator integrals
// see distinct spectral projections.
struct SpectralGroup {
  int start = 0;   // first column of the group in `basis`
  int size = 0;
  double phase = 0.0;  // circular-mean representative
};

struct SpectralDecomp {
  CMat basis;
  std::vector<double> phases;
  std::vector<SpectralGroup> groups;

  int dim() const { return static_cast<int>(basis.rows()); }
  CMat projector(int g) const;                // P_g = V_g V_g*
  CMat group_block(const CMat& x, int gr, int gc,
                   const SpectralDecomp& right) const;  // V_g* x W_h
};

inline constexpr double kDefaultGroupTol = 1e-8;  // radians

double unitarity_residual(const CMat& u);  // ||U*U - I||_inf

// Requires ||U*U - I||_inf <= tol.  Eigenvectors come from a two-pass
// Hermitian solve on (U+U*)/2 and (U-U*)/2i, so the basis is orthonormal
// by construction even across clustered eigenvalues.
SpectralDecomp unitary_eig(const CMat& u, double tol = 1e-10,
                           double group_tol = kDefaultGroupTol);

// residual ||U V - V diag(e^{i phase})||_inf of a decomposition
double spectral_residual(const CMat& u, const SpectralDecomp& d);

}  // namespace opcalc
