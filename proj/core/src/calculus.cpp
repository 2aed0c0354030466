#include "opcalc/calculus.hpp"

#include <cmath>

namespace opcalc {

Contraction::Contraction(CMat t) : mat_(std::move(t)) {
  require_finite(mat_, "Contraction");
  if (mat_.rows() != mat_.cols() || mat_.rows() == 0)
    throw std::invalid_argument("Contraction: matrix must be square and nonempty");
  norm_ = operator_norm(mat_);
  if (norm_ > 1.0 + 1e-10)
    throw std::invalid_argument("Contraction: operator norm exceeds 1 beyond tolerance");
  if (norm_ > 1.0) {
    mat_ /= norm_;
    norm_ = 1.0;
    rescaled_ = true;
  }
  delta_ = norm_ < 1.0 ? std::sqrt(1.0 - norm_ * norm_) : 0.0;
}

DefectPair defects(const Contraction& t) {
  Eigen::BDCSVD<CMat> svd(t.mat(), Eigen::ComputeFullU | Eigen::ComputeFullV);
  const RVec& s = svd.singularValues();
  RVec d(s.size());
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    // singular values within rounding of 1 count as exactly 1, so defects of
    // (numerically) unitary inputs vanish identically instead of leaving
    // sqrt(eps)-size noise in the dilation blocks
    const double gap = 1.0 - s(i) * s(i);
    d(i) = gap > 1e-13 ? std::sqrt(gap) : 0.0;
  }
  DefectPair p;
  p.d_t = svd.matrixV() * d.asDiagonal() * svd.matrixV().adjoint();
  p.d_tstar = svd.matrixU() * d.asDiagonal() * svd.matrixU().adjoint();
  return p;
}

CMat FiniteDilation::compress(const CMat& big) const {
  return big.topLeftCorner(base_dim, base_dim);
}

CMat FiniteDilation::embed(const CMat& small) const {
  if (small.rows() != base_dim || small.cols() != base_dim)
    throw std::invalid_argument("FiniteDilation::embed: dimension mismatch");
  CMat out = CMat::Zero(u.rows(), u.cols());
  out.topLeftCorner(base_dim, base_dim) = small;
  return out;
}

FiniteDilation finite_dilation(const Contraction& t, int n_degree) {
  if (n_degree < 1) throw std::invalid_argument("finite_dilation: N must be >= 1");
  const int n = t.dim();
  const int m = (n_degree + 1) * n;
  const DefectPair d = defects(t);

  CMat u = CMat::Zero(m, m);
  u.block(0, 0, n, n) = t.mat();
  u.block(0, n_degree * n, n, n) = d.d_tstar;
  u.block(n, 0, n, n) = d.d_t;
  u.block(n, n_degree * n, n, n) = -t.mat().adjoint();
  for (int j = 1; j < n_degree; ++j)
    u.block((j + 1) * n, j * n, n, n) = CMat::Identity(n, n);

  FiniteDilation fd;
  fd.u = std::move(u);
  fd.base_dim = n;
  fd.valid_degree = n_degree;
  fd.unitarity = unitarity_residual(fd.u);
  if (fd.unitarity > 1e-8)
    throw std::runtime_error("finite_dilation: unitarity residual exceeds 1e-8");
  return fd;
}

CalcResult calc_fourier(const CircleFunction& f, const Contraction& t) {
  if (!f.is_polynomial())
    throw std::invalid_argument("calc_fourier: f must be a trig polynomial");
  const int n = t.dim();
  const int d = f.degree();
  CMat acc = f.coeff(0) * CMat::Identity(n, n);
  CMat pow = CMat::Identity(n, n);
  const CMat adj = t.mat().adjoint();
  CMat pow_adj = CMat::Identity(n, n);
  for (int k = 1; k <= d; ++k) {
    pow = pow * t.mat();
    pow_adj = pow_adj * adj;
    const Complex cp = f.coeff(k);
    const Complex cn = f.coeff(-k);
    if (cp != Complex(0.0, 0.0)) acc += cp * pow;
    if (cn != Complex(0.0, 0.0)) acc += cn * pow_adj;
  }
  return CalcResult{std::move(acc), f.trunc_err};
}

CMat calc_spectral(const CircleFunction& f, const SpectralDecomp& d) {
  const int n = d.dim();
  CVec vals(n);
  for (int j = 0; j < n; ++j) vals(j) = f.eval(d.phases[static_cast<size_t>(j)]);
  return d.basis * vals.asDiagonal() * d.basis.adjoint();
}

CMat calc_spectral(const CircleFunction& f, const CMat& u, double tol) {
  return calc_spectral(f, unitary_eig(u, tol));
}

CalcResult calc_dilation(const CircleFunction& f, const Contraction& t, int n_degree) {
  if (!f.is_polynomial())
    throw std::invalid_argument("calc_dilation: f must be a trig polynomial");
  if (f.degree() > n_degree)
    throw std::invalid_argument("calc_dilation: degree(f) exceeds dilation degree");
  const FiniteDilation fd = finite_dilation(t, n_degree);
  const CMat big = calc_spectral(f, fd.u, 1e-8);
  return CalcResult{fd.compress(big), f.trunc_err};
}

}  // namespace opcalc
