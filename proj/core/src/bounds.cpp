#include "opcalc/bounds.hpp"

#include <cmath>
#include <numbers>
#include <vector>

namespace opcalc {

namespace {

// Gauss-Legendre nodes/weights on (-1, 1) by Newton iteration on P_k.
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

GaussRule gauss_legendre(int k) {
  GaussRule r;
  r.nodes.resize(static_cast<size_t>(k));
  r.weights.resize(static_cast<size_t>(k));
  for (int i = 0; i < k; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (k + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int j = 2; j <= k; ++j) {
        const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      dp = k * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    r.nodes[static_cast<size_t>(i)] = x;
    r.weights[static_cast<size_t>(i)] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return r;
}

const GaussRule& cached_rule(int k) {
  static const GaussRule g8 = gauss_legendre(8);
  static const GaussRule g16 = gauss_legendre(16);
  static const GaussRule g24 = gauss_legendre(24);
  if (k == 8) return g8;
  if (k == 16) return g16;
  if (k == 24) return g24;
  thread_local GaussRule custom;
  custom = gauss_legendre(k);
  return custom;
}

void check_psd_contraction(const HermEig& e, const char* who, double min_eig) {
  const double tol = 1e-10;
  if (e.evals(0) < min_eig - tol)
    throw std::invalid_argument(std::string(who) + ": matrix violates its lower spectral bound");
  if (e.evals(e.evals.size() - 1) > 1.0 + tol)
    throw std::invalid_argument(std::string(who) + ": matrix is not a contraction");
}

}  // namespace

BoundReport make_report(double lhs, double rhs, double constant_used,
                        const SchattenOrder& p) {
  BoundReport r;
  r.lhs = lhs;
  r.rhs = rhs;
  r.constant_used = constant_used;
  r.slack = rhs - lhs;
  r.p = p.value();
  return r;
}

QuadResult exp_integral_diff(const CMat& a, const CMat& b, double delta,
                             const QuadConfig& quad) {
  if (!(delta > 0.0)) throw std::invalid_argument("exp_integral_diff: delta must be > 0");
  if (a.rows() != b.rows() || a.cols() != b.cols() || a.rows() != a.cols())
    throw std::invalid_argument("exp_integral_diff: dimension mismatch");
  const HermEig ea = herm_eig(a);
  const HermEig eb = herm_eig(b);
  check_psd_contraction(ea, "exp_integral_diff(A)", 0.0);
  check_psd_contraction(eb, "exp_integral_diff(B)", delta);

  const Eigen::Index n = a.rows();
  const CMat c = a * a - b * b;
  // mixed-basis kernel: integrand(t)_{ij} = e^{-t alpha_i} K_{ij} e^{-t beta_j}
  const CMat k = ea.evecs.adjoint() * c * eb.evecs;
  const RVec& alpha = ea.evals;
  const RVec& beta = eb.evals;

  const double t_max = std::max(quad.t_max_factor / delta, quad.t_max_factor);
  const double target = quad.rel_tol * (a - b).norm() + 1e-18 * (1.0 + k.norm());

  int evals = 0;
  auto panel = [&](double lo, double hi, int pts) {
    const GaussRule& g = cached_rule(pts);
    CMat acc = CMat::Zero(n, n);
    const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
    for (int q = 0; q < pts; ++q) {
      const double t = mid + half * g.nodes[static_cast<size_t>(q)];
      const double w = half * g.weights[static_cast<size_t>(q)];
      for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
          acc(i, j) += w * std::exp(-t * (alpha(i) + beta(j))) * k(i, j);
      ++evals;
    }
    return acc;
  };

  CMat total = CMat::Zero(n, n);
  double err_acc = 0.0;

  if (quad.fixed_panels > 0) {
    const double h = t_max / quad.fixed_panels;
    for (int i = 0; i < quad.fixed_panels; ++i) {
      const CMat fine = panel(i * h, (i + 1) * h, quad.points);
      const CMat coarse = panel(i * h, (i + 1) * h, quad.points / 2);
      total += fine;
      err_acc += (fine - coarse).norm();
    }
  } else {
    struct Seg {
      double lo, hi, tol;
      int depth;
    };
    std::vector<Seg> work{{0.0, t_max, target, 0}};
    while (!work.empty()) {
      const Seg s = work.back();
      work.pop_back();
      const CMat fine = panel(s.lo, s.hi, quad.points);
      const CMat coarse = panel(s.lo, s.hi, quad.points / 2);
      const double err = (fine - coarse).norm();
      if (err <= s.tol || s.depth >= quad.max_depth) {
        total += fine;
        err_acc += err;
      } else {
        const double mid = 0.5 * (s.lo + s.hi);
        work.push_back({s.lo, mid, 0.5 * s.tol, s.depth + 1});
        work.push_back({mid, s.hi, 0.5 * s.tol, s.depth + 1});
      }
    }
  }

  QuadResult out;
  out.value = ea.evecs * total * eb.evecs.adjoint();
  out.tail_bound = std::exp(-delta * t_max) / delta * schatten_norm(c, SchattenOrder::inf());
  out.quad_err = err_acc + out.tail_bound;
  out.evaluations = evals;
  return out;
}

BoundReport sqrt_lipschitz_check(const CMat& a, const CMat& b, double delta,
                                 const SchattenOrder& p) {
  if (!(delta > 0.0)) throw std::invalid_argument("sqrt_lipschitz_check: delta must be > 0");
  check_psd_contraction(herm_eig(a), "sqrt_lipschitz_check(A)", 0.0);
  check_psd_contraction(herm_eig(b), "sqrt_lipschitz_check(B)", delta);
  const double lhs = schatten_norm(a - b, p);
  const double rhs = schatten_norm(a * a - b * b, p) / delta;
  return make_report(lhs, rhs, 1.0 / delta, p);
}

DefectDiffReport defect_diff_check(const Contraction& t0, const Contraction& t1,
                                   const SchattenOrder& p) {
  if (!t0.is_strict())
    throw std::invalid_argument("defect_diff_check: T0 must be a strict contraction");
  const DefectPair d0 = defects(t0);
  const DefectPair d1 = defects(t1);
  const double delta = t0.delta();
  const double gap = schatten_norm(t1.mat() - t0.mat(), p);
  const double rhs = 2.0 / delta * gap;

  DefectDiffReport r;
  r.d = make_report(schatten_norm(d1.d_t - d0.d_t, p), rhs, 2.0 / delta, p);
  r.d_star = make_report(schatten_norm(d1.d_tstar - d0.d_tstar, p), rhs, 2.0 / delta, p);
  const CMat sq = t1.mat().adjoint() * t1.mat() - t0.mat().adjoint() * t0.mat();
  r.squares = make_report(schatten_norm(sq, p), 2.0 * gap, 2.0, p);
  return r;
}

double dilation_diff_constant(double delta, const SchattenOrder& p) {
  const double pref = p.is_inf() ? 1.0 : std::pow(2.0, 1.0 / p.value());
  return pref * (2.0 + delta) / delta;
}

DilationDiffReport dilation_diff_check(const Contraction& t0, const Contraction& t1,
                                       int n_degree, const SchattenOrder& p) {
  if (!t0.is_strict())
    throw std::invalid_argument("dilation_diff_check: T0 must be a strict contraction");
  if (t0.dim() != t1.dim())
    throw std::invalid_argument("dilation_diff_check: dimension mismatch");
  const FiniteDilation u0 = finite_dilation(t0, n_degree);
  const FiniteDilation u1 = finite_dilation(t1, n_degree);
  const CMat diff = u1.u - u0.u;
  const double gap = schatten_norm(t1.mat() - t0.mat(), p);
  const double constant = dilation_diff_constant(t0.delta(), p);

  DilationDiffReport r;
  r.report = make_report(schatten_norm(diff, p), constant * gap, constant, p);

  // the two-term split of the block difference: the (T1-T0, -(T1-T0)*) part
  // and the defect-difference part occupy disjoint rows and columns
  const int n = t0.dim();
  CMat shift_part = CMat::Zero(diff.rows(), diff.cols());
  shift_part.block(0, 0, n, n) = diff.block(0, 0, n, n);
  shift_part.block(n, n_degree * n, n, n) = diff.block(n, n_degree * n, n, n);
  CMat defect_part = CMat::Zero(diff.rows(), diff.cols());
  defect_part.block(n, 0, n, n) = diff.block(n, 0, n, n);
  defect_part.block(0, n_degree * n, n, n) = diff.block(0, n_degree * n, n, n);
  r.split_shift_norm = schatten_norm(shift_part, p);
  r.split_defect_norm = schatten_norm(defect_part, p);
  return r;
}

BoundReport series_bound_check(const CircleFunction& f, const Contraction& t0,
                               const Contraction& t1, const SchattenOrder& p) {
  const double constant = weighted_coeff_sum(f);
  const double gap = schatten_norm(t1.mat() - t0.mat(), p);
  const CMat lhs = calc_fourier(f, t1).value - calc_fourier(f, t0).value;
  BoundReport r = make_report(schatten_norm(lhs, p), constant * gap, constant, p);
  r.f_id = f.id;
  return r;
}

BoundReport strict_pair_check(const CircleFunction& f, const Contraction& t0,
                              const Contraction& t1, const SchattenOrder& p) {
  if (!t0.is_strict() || !t1.is_strict())
    throw std::invalid_argument("strict_pair_check: both contractions must be strict");
  const double mx = std::max(t0.norm(), t1.norm());
  const double constant =
      std::numbers::sqrt2 * lip_chordal(f) / std::sqrt(1.0 - mx * mx);
  const double gap = schatten_norm(t1.mat() - t0.mat(), p);
  const CMat lhs = calc_fourier(f, t1).value - calc_fourier(f, t0).value;
  BoundReport r = make_report(schatten_norm(lhs, p), constant * gap, constant, p);
  r.f_id = f.id;
  return r;
}

BoundReport p2_chain_check(const CircleFunction& f, const Contraction& t0,
                           const Contraction& t1) {
  if (!t0.is_strict())
    throw std::invalid_argument("p2_chain_check: T0 must be a strict contraction");
  const SchattenOrder two(2.0);
  const double delta = t0.delta();
  const double constant =
      std::numbers::sqrt2 * (2.0 + delta) / delta * lip_chordal(f);
  const double gap = schatten_norm(t1.mat() - t0.mat(), two);
  const CMat lhs = calc_fourier(f, t1).value - calc_fourier(f, t0).value;
  BoundReport r = make_report(schatten_norm(lhs, two), constant * gap, constant, two);
  r.f_id = f.id;
  return r;
}

RatioRecord lipschitz_ratio(const CircleFunction& f, const Contraction& t0,
                            const Contraction& t1, const SchattenOrder& p,
                            int n_degree) {
  if (f.degree() > n_degree)
    throw std::invalid_argument("lipschitz_ratio: degree(f) exceeds dilation degree");
  const double lip = lip_arc(f);
  const double gap = schatten_norm(t1.mat() - t0.mat(), p);
  if (lip * gap < 1e-12)
    throw std::domain_error("lipschitz_ratio: degenerate denominator");

  const CMat diff = calc_fourier(f, t1).value - calc_fourier(f, t0).value;
  RatioRecord r;
  r.lhs = schatten_norm(diff, p);
  r.gap_p = gap;
  r.ratio = r.lhs / (lip * gap);
  r.p = p.value();
  r.delta = t0.delta();
  r.f_id = f.id;
  r.envelope = t0.is_strict() ? dilation_diff_constant(r.delta, p)
                              : std::numeric_limits<double>::infinity();

  double gap_half = 0.0;
  if (p.is_inf()) {
    gap_half = gap;
  } else if (p.value() / 2.0 >= 1.0) {
    gap_half = schatten_norm(t1.mat() - t0.mat(), SchattenOrder(p.value() / 2.0));
  } else {
    gap_half = schatten_quasi_norm(t1.mat() - t0.mat(), p.value() / 2.0);
  }
  const double mixed = std::max(gap, std::sqrt(gap_half));
  r.ratio_mixed = mixed > 1e-12 ? r.lhs / (lip * mixed) : 0.0;
  const double pref = p.is_inf() ? 1.0 : std::pow(2.0, 1.0 / p.value());
  r.k_p = (p.value() >= 2.0) ? pref * (1.0 + std::numbers::sqrt2)
                             : pref * (1.0 + std::pow(2.0, 2.0 / p.value()));
  return r;
}

}  // namespace opcalc
