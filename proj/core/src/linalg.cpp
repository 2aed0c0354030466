#include "opcalc/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace opcalc {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_phase(double t) {
  t = std::fmod(t, kTwoPi);
  if (t < 0) t += kTwoPi;
  if (t >= kTwoPi) t = 0.0;
  return t;
}
}  // namespace

bool all_finite(const CMat& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      const Complex& z = m(i, j);
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    }
  return true;
}

void require_finite(const CMat& m, const char* who) {
  if (!all_finite(m))
    throw std::invalid_argument(std::string(who) + ": non-finite matrix entry");
}

double max_abs(const CMat& a) {
  if (a.size() == 0) return 0.0;
  return a.cwiseAbs().maxCoeff();
}

RVec singular_values(const CMat& m) {
  require_finite(m, "singular_values");
  if (m.size() == 0) return RVec();
  Eigen::BDCSVD<CMat> svd(m);
  return svd.singularValues();
}

double operator_norm(const CMat& m) {
  if (m.size() == 0) return 0.0;
  RVec s = singular_values(m);
  return s.size() ? s(0) : 0.0;
}

double schatten_norm(const CMat& m, const SchattenOrder& p) {
  require_finite(m, "schatten_norm");
  if (m.size() == 0) return 0.0;
  RVec s = singular_values(m);
  if (s.size() == 0) return 0.0;
  const double smax = s(0);
  if (p.is_inf() || smax == 0.0) return smax;
  const double pv = p.value();
  // Schatten-1 is the most roundoff-sensitive norm used downstream; noise
  // singular values would otherwise accumulate linearly in the sum.
  const double floor = (pv < 1.5) ? 1e-14 * smax : 0.0;
  double acc = 0.0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    const double si = s(i);
    if (si <= floor) continue;
    acc += std::pow(si / smax, pv);
  }
  return smax * std::pow(acc, 1.0 / pv);
}

double schatten_quasi_norm(const CMat& m, double q) {
  if (!(q > 0.0) || q >= 1.0)
    throw std::invalid_argument("schatten_quasi_norm: q must be in (0,1)");
  require_finite(m, "schatten_quasi_norm");
  RVec s = singular_values(m);
  if (s.size() == 0 || s(0) == 0.0) return 0.0;
  const double smax = s(0);
  double acc = 0.0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > 0.0) acc += std::pow(s(i) / smax, q);
  return smax * std::pow(acc, 1.0 / q);
}

HermEig herm_eig(const CMat& h, double tol) {
  require_finite(h, "herm_eig");
  if (h.rows() != h.cols()) throw std::invalid_argument("herm_eig: matrix not square");
  if (h.rows() == 0) throw std::invalid_argument("herm_eig: empty matrix");
  const double scale = max_abs(h);
  const double defect = max_abs(h - h.adjoint());
  if (defect > tol * std::max(scale, 1.0))
    throw std::invalid_argument("herm_eig: input not Hermitian within tolerance");
  Eigen::SelfAdjointEigenSolver<CMat> es(hermitize(h));
  if (es.info() != Eigen::Success) throw std::runtime_error("herm_eig: eigensolver failed");
  return HermEig{es.eigenvalues(), es.eigenvectors()};
}

CMat psd_sqrt(const CMat& h, double tol) {
  HermEig e = herm_eig(h, tol);
  const double scale = std::max(1.0, e.evals.size() ? std::abs(e.evals(e.evals.size() - 1)) : 1.0);
  RVec root(e.evals.size());
  for (Eigen::Index i = 0; i < e.evals.size(); ++i) {
    double v = e.evals(i);
    if (v < -tol * scale)
      throw std::invalid_argument("psd_sqrt: eigenvalue below -tol, input not PSD");
    root(i) = v > 0.0 ? std::sqrt(v) : 0.0;
  }
  return e.evecs * root.asDiagonal() * e.evecs.adjoint();
}

CMat herm_exp(const CMat& h, double s, double tol) {
  HermEig e = herm_eig(h, tol);
  RVec d(e.evals.size());
  for (Eigen::Index i = 0; i < e.evals.size(); ++i) d(i) = std::exp(s * e.evals(i));
  return e.evecs * d.asDiagonal() * e.evecs.adjoint();
}

double unitarity_residual(const CMat& u) {
  if (u.rows() != u.cols() || u.rows() == 0)
    throw std::invalid_argument("unitarity_residual: matrix not square or empty");
  CMat r = u.adjoint() * u - CMat::Identity(u.rows(), u.cols());
  return operator_norm(r);
}

CMat SpectralDecomp::projector(int g) const {
  const SpectralGroup& gr = groups.at(static_cast<size_t>(g));
  CMat v = basis.middleCols(gr.start, gr.size);
  return v * v.adjoint();
}

CMat SpectralDecomp::group_block(const CMat& x, int gr, int gc,
                                 const SpectralDecomp& right) const {
  const SpectralGroup& a = groups.at(static_cast<size_t>(gr));
  const SpectralGroup& b = right.groups.at(static_cast<size_t>(gc));
  return basis.middleCols(a.start, a.size).adjoint() * x *
         right.basis.middleCols(b.start, b.size);
}

SpectralDecomp unitary_eig(const CMat& u, double tol, double group_tol) {
  require_finite(u, "unitary_eig");
  if (u.rows() != u.cols()) throw std::invalid_argument("unitary_eig: matrix not square");
  const Eigen::Index n = u.rows();
  if (n == 0) throw std::invalid_argument("unitary_eig: empty matrix");
  if (unitarity_residual(u) > tol)
    throw std::invalid_argument("unitary_eig: input not unitary within tolerance");

  // Pass 1: eigenbasis of the Hermitian part.  Pass 2: within each cluster
  // of cos-values, diagonalize the compressed skew part.  Both passes emit
  // orthonormal bases, so the assembled basis is orthonormal regardless of
  // how eigenvalues cluster.
  const CMat a = hermitize(u);
  const CMat b = hermitize(u * Complex(0.0, -1.0));  // (U - U*)/(2i)
  Eigen::SelfAdjointEigenSolver<CMat> esa(a);
  if (esa.info() != Eigen::Success) throw std::runtime_error("unitary_eig: cos-pass failed");
  CMat basis = esa.eigenvectors();
  const RVec ca = esa.eigenvalues();

  const double cos_cluster_tol = 1e-6;
  Eigen::Index lo = 0;
  while (lo < n) {
    Eigen::Index hi = lo + 1;
    while (hi < n && ca(hi) - ca(hi - 1) <= cos_cluster_tol) ++hi;
    const Eigen::Index k = hi - lo;
    if (k > 1) {
      CMat vc = basis.middleCols(lo, k);
      Eigen::SelfAdjointEigenSolver<CMat> esb(CMat(vc.adjoint() * b * vc));
      if (esb.info() != Eigen::Success)
        throw std::runtime_error("unitary_eig: sin-pass failed");
      basis.middleCols(lo, k) = vc * esb.eigenvectors();
    }
    lo = hi;
  }

  // Phases from the diagonal of V*UV, then a canonical ascending sort.
  CMat d = basis.adjoint() * u * basis;
  std::vector<int> order(static_cast<size_t>(n));
  std::vector<double> raw(static_cast<size_t>(n));
  for (Eigen::Index j = 0; j < n; ++j) {
    raw[static_cast<size_t>(j)] = wrap_phase(std::arg(d(j, j)));
    order[static_cast<size_t>(j)] = static_cast<int>(j);
  }
  std::stable_sort(order.begin(), order.end(),
                   [&](int x, int y) { return raw[static_cast<size_t>(x)] < raw[static_cast<size_t>(y)]; });

  SpectralDecomp out;
  out.basis.resize(n, n);
  out.phases.resize(static_cast<size_t>(n));
  for (Eigen::Index j = 0; j < n; ++j) {
    out.basis.col(j) = basis.col(order[static_cast<size_t>(j)]);
    out.phases[static_cast<size_t>(j)] = raw[static_cast<size_t>(order[static_cast<size_t>(j)])];
  }

  // Circular grouping: adjacent phases within group_tol merge; the last
  // group wraps onto the first when 2pi-adjacent.
  const int nn = static_cast<int>(n);
  std::vector<SpectralGroup> groups;
  int start = 0;
  for (int j = 1; j <= nn; ++j) {
    const bool brk = (j == nn) ||
                     (out.phases[static_cast<size_t>(j)] - out.phases[static_cast<size_t>(j - 1)] > group_tol);
    if (brk) {
      groups.push_back(SpectralGroup{start, j - start, 0.0});
      start = j;
    }
  }
  if (groups.size() >= 2) {
    const double wrap_gap = (kTwoPi - out.phases.back()) + out.phases.front();
    if (wrap_gap <= group_tol) {
      // rotate columns so the wrapped tail precedes the head, then merge
      SpectralGroup tail = groups.back();
      groups.pop_back();
      CMat rot(n, n);
      std::vector<double> ph(static_cast<size_t>(n));
      int w = 0;
      for (int j = tail.start; j < nn; ++j, ++w) {
        rot.col(w) = out.basis.col(j);
        ph[static_cast<size_t>(w)] = out.phases[static_cast<size_t>(j)] - kTwoPi;
      }
      for (int j = 0; j < tail.start; ++j, ++w) {
        rot.col(w) = out.basis.col(j);
        ph[static_cast<size_t>(w)] = out.phases[static_cast<size_t>(j)];
      }
      out.basis = rot;
      out.phases = ph;
      for (auto& g : groups) g.start += tail.size;
      groups.front().start = 0;
      groups.front().size += tail.size;
    }
  }
  for (auto& g : groups) {
    Complex mean(0.0, 0.0);
    for (int j = g.start; j < g.start + g.size; ++j)
      mean += std::polar(1.0, out.phases[static_cast<size_t>(j)]);
    g.phase = wrap_phase(std::arg(mean));
  }
  // store phases back to [0, 2pi) after any wrap adjustment
  for (auto& t : out.phases) t = wrap_phase(t);
  out.groups = std::move(groups);
  return out;
}

double spectral_residual(const CMat& u, const SpectralDecomp& d) {
  const Eigen::Index n = u.rows();
  CMat lam = CMat::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    lam(j, j) = std::polar(1.0, d.phases[static_cast<size_t>(j)]);
  return operator_norm(u * d.basis - d.basis * lam);
}

}  // namespace opcalc
