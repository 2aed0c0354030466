#include "opcalc/circle_function.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <queue>

namespace opcalc {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Term2D {
  int a = 0, b = 0;
  Complex c;
};

// power table z^k for k in [lo, hi], built incrementally from z = e^{it}
std::vector<Complex> power_table(double t, int lo, int hi) {
  std::vector<Complex> p(static_cast<size_t>(hi - lo + 1));
  const Complex z = std::polar(1.0, t);
  const Complex zin = std::conj(z);
  Complex acc(1.0, 0.0);
  p[static_cast<size_t>(-lo)] = acc;
  for (int k = 1; k <= hi; ++k) {
    acc *= z;
    p[static_cast<size_t>(k - lo)] = acc;
  }
  acc = Complex(1.0, 0.0);
  for (int k = -1; k >= lo; --k) {
    acc *= zin;
    p[static_cast<size_t>(k - lo)] = acc;
  }
  return p;
}

// ---- certified sup of |sum c_k e^{ikt}| via branch & bound -----------------
//
// Work with q = |p|^2: its gradient vanishes wherever |p| is flat, which the
// first-order term of a bound on |p| itself would miss.  Box bound:
// q(c) + |q'(c)| r + Bq2 r^2 / 2 with Bq2 = sum f^2 |q_hat(f)| (q is a trig
// polynomial with coefficients from the self-correlation of p).  The upper
// bound is sound at every stopping point; the loop narrows the relative gap
// to rel_gap (or stops at the box cap, staying sound).

struct SupResult {
  double upper = 0.0;
  double lower = 0.0;
};

struct Series1D {
  std::vector<std::pair<int, Complex>> terms;
  int lo = 0, hi = 0;

  void finalize() {
    lo = hi = 0;
    for (auto& [k, c] : terms) {
      lo = std::min(lo, k);
      hi = std::max(hi, k);
    }
  }
  void eval_q(double t, double& q, double& dq) const {
    auto p = power_table(t, lo, hi);
    Complex v(0.0, 0.0), dv(0.0, 0.0);
    for (auto& [k, c] : terms) {
      const Complex e = c * p[static_cast<size_t>(k - lo)];
      v += e;
      dv += Complex(0.0, static_cast<double>(k)) * e;
    }
    q = std::norm(v);
    dq = 2.0 * (std::conj(v) * dv).real();
  }
  double hessian_bound_q() const {
    // q_hat(f) = sum_j c_j conj(c_{j-f})
    const int span = hi - lo;
    std::vector<Complex> qc(static_cast<size_t>(2 * span + 1), Complex(0.0, 0.0));
    for (auto& [j, cj] : terms)
      for (auto& [k, ck] : terms)
        qc[static_cast<size_t>(j - k + span)] += cj * std::conj(ck);
    double b = 0.0;
    for (int f = -span; f <= span; ++f)
      b += static_cast<double>(f) * f * std::abs(qc[static_cast<size_t>(f + span)]);
    return b;
  }
};

SupResult certified_sup_1d(const Series1D& s, double rel_gap) {
  if (s.terms.empty()) return {};
  double scale = 0.0;
  for (auto& [k, c] : s.terms) scale += std::abs(c);
  const double bq2 = s.hessian_bound_q();

  struct Box {
    double center, radius, ub;
  };
  auto cmp = [](const Box& x, const Box& y) { return x.ub < y.ub; };
  std::priority_queue<Box, std::vector<Box>, decltype(cmp)> pq(cmp);

  double lower = 0.0;
  auto push_box = [&](double c, double r) {
    double q, dq;
    s.eval_q(c, q, dq);
    lower = std::max(lower, q);
    pq.push(Box{c, r, q + std::abs(dq) * r + 0.5 * bq2 * r * r});
  };

  const int span = std::max(1, s.hi - s.lo);
  const int m0 = std::clamp(8 * span, 64, 8192);
  const double r0 = kPi / m0;
  for (int j = 0; j < m0; ++j) push_box((2 * j + 1) * r0, r0);

  const double floor_q = 1e-28 * (1.0 + scale * scale);
  size_t evals = static_cast<size_t>(m0);
  const size_t cap = 3'000'000;
  while (!pq.empty() && evals < cap) {
    const Box top = pq.top();
    if (top.ub <= lower + std::max(2.0 * rel_gap * lower, floor_q)) break;
    pq.pop();
    const double r = top.radius / 2.0;
    push_box(top.center - r, r);
    push_box(top.center + r, r);
    evals += 2;
  }
  const double upper_q = pq.empty() ? lower : std::max(lower, pq.top().ub);
  return {std::sqrt(upper_q), std::sqrt(lower)};
}

// ---- 2D analogue on sum c e^{i(a x + b y)}, again through Q = |P|^2 --------
//
// Callers pass the series in rotated coordinates (x = midpoint, y = half
// separation) so the ridge lines of divided-difference symbols are axis
// aligned; boxes split along whichever axis actually contributes to their
// bound, which collapses those ridges to one-dimensional searches.  With
// s_band > 0, boxes whose y stays within s_band of {0, pi} are dropped:
// there the symbol is controlled by the arc seminorm and the caller adds
// that bound separately.

struct Series2D {
  std::vector<Term2D> terms;
  int alo = 0, ahi = 0, blo = 0, bhi = 0;

  void finalize() {
    alo = ahi = blo = bhi = 0;
    for (auto& t : terms) {
      alo = std::min(alo, t.a);
      ahi = std::max(ahi, t.a);
      blo = std::min(blo, t.b);
      bhi = std::max(bhi, t.b);
    }
  }
  void eval_q(double x, double y, double& q, double& qx, double& qy) const {
    auto pa = power_table(x, alo, ahi);
    auto pb = power_table(y, blo, bhi);
    Complex v(0.0, 0.0), va(0.0, 0.0), vb(0.0, 0.0);
    for (auto& t : terms) {
      const Complex e =
          t.c * pa[static_cast<size_t>(t.a - alo)] * pb[static_cast<size_t>(t.b - blo)];
      v += e;
      va += Complex(0.0, static_cast<double>(t.a)) * e;
      vb += Complex(0.0, static_cast<double>(t.b)) * e;
    }
    q = std::norm(v);
    qx = 2.0 * (std::conj(v) * va).real();
    qy = 2.0 * (std::conj(v) * vb).real();
  }
  // Hessian bounds of Q from the self-correlation of the term list
  void hessian_bounds_q(double& baa, double& bab, double& bbb) const {
    std::map<std::pair<int, int>, Complex> qc;
    for (auto& t1 : terms)
      for (auto& t2 : terms)
        qc[{t1.a - t2.a, t1.b - t2.b}] += t1.c * std::conj(t2.c);
    baa = bab = bbb = 0.0;
    for (auto& [f, c] : qc) {
      const double da = std::abs(static_cast<double>(f.first));
      const double db = std::abs(static_cast<double>(f.second));
      const double ac = std::abs(c);
      baa += da * da * ac;
      bab += da * db * ac;
      bbb += db * db * ac;
    }
  }
};

double dist_to_0_pi(double y) {
  double u = std::fmod(y, kPi);
  if (u < 0) u += kPi;
  return std::min(u, kPi - u);
}

SupResult certified_sup_2d(const Series2D& s, double rel_gap, double s_band = 0.0) {
  if (s.terms.empty()) return {};
  double scale = 0.0;
  for (auto& t : s.terms) scale += std::abs(t.c);
  double baa, bab, bbb;
  s.hessian_bounds_q(baa, bab, bbb);

  struct Box {
    double cx, cy, rx, ry, ub, qx, qy;
  };
  auto cmp = [](const Box& x, const Box& y) { return x.ub < y.ub; };
  std::priority_queue<Box, std::vector<Box>, decltype(cmp)> pq(cmp);

  double lower = 0.0;
  auto push_box = [&](double cx, double cy, double rx, double ry) {
    if (s_band > 0.0 && dist_to_0_pi(cy) + ry <= s_band) return;
    double q, qx, qy;
    s.eval_q(cx, cy, q, qx, qy);
    lower = std::max(lower, q);
    const double ub = q + std::abs(qx) * rx + std::abs(qy) * ry +
                      0.5 * (baa * rx * rx + 2.0 * bab * rx * ry + bbb * ry * ry);
    pq.push(Box{cx, cy, rx, ry, ub, std::abs(qx), std::abs(qy)});
  };

  const int span = std::max({1, s.ahi - s.alo, s.bhi - s.blo});
  const int m0 = std::clamp(2 * span, 16, 96);
  const double r0 = kPi / m0;
  for (int i = 0; i < m0; ++i)
    for (int j = 0; j < m0; ++j)
      push_box((2 * i + 1) * r0, (2 * j + 1) * r0, r0, r0);

  const double floor_q = 1e-26 * (1.0 + scale * scale);
  size_t evals = static_cast<size_t>(m0) * m0;
  const size_t cap = 4'000'000;
  while (!pq.empty() && evals < cap) {
    const Box top = pq.top();
    if (top.ub <= lower + std::max(2.0 * rel_gap * lower, floor_q)) break;
    pq.pop();
    const double gx = top.qx * top.rx + 0.5 * baa * top.rx * top.rx + bab * top.rx * top.ry;
    const double gy = top.qy * top.ry + 0.5 * bbb * top.ry * top.ry + bab * top.rx * top.ry;
    const bool split_x = gx > gy || (gx == gy && top.rx >= top.ry);
    if (split_x) {
      const double r = top.rx / 2.0;
      push_box(top.cx - r, top.cy, r, top.ry);
      push_box(top.cx + r, top.cy, r, top.ry);
    } else {
      const double r = top.ry / 2.0;
      push_box(top.cx, top.cy - r, top.rx, r);
      push_box(top.cx, top.cy + r, top.rx, r);
    }
    evals += 2;
  }
  const double upper_q = pq.empty() ? lower : std::max(lower, pq.top().ub);
  return {std::sqrt(upper_q), std::sqrt(lower)};
}

// Divided-difference symbol of a trig polynomial as a 2D series:
// (z^n - w^n)/(z - w) expands into monomials with no cancellation.  Emitted
// in rotated coordinates x = (l+m)/2, y = (l-m)/2, so a monomial
// e^{i(a l + b m)} becomes e^{i((a+b) x + (a-b) y)}; the diagonal and its
// ridges become axis-aligned lines y in {0, pi}.
Series2D divided_difference_series(const CircleFunction& f) {
  Series2D s;
  auto push = [&s](int a, int b, Complex c) {
    s.terms.push_back(Term2D{a + b, a - b, c});
  };
  for (int n = -f.degree(); n <= f.degree(); ++n) {
    const Complex c = f.coeff(n);
    if (n == 0 || c == Complex(0.0, 0.0)) continue;
    if (n > 0) {
      for (int j = 0; j < n; ++j) push(j, n - 1 - j, c);
    } else {
      const int k = -n;
      for (int j = 0; j < k; ++j) push(j - k, -1 - j, -c);
    }
  }
  s.finalize();
  return s;
}

}  // namespace

// ------------------------------ CircleFunction ------------------------------

CircleFunction::CircleFunction() : degree_(0), coeffs_(1, Complex(0.0, 0.0)) {}

CircleFunction::CircleFunction(int degree, std::vector<Complex> coeffs)
    : degree_(degree), coeffs_(std::move(coeffs)) {
  if (degree_ < 0) throw std::invalid_argument("CircleFunction: negative degree");
  if (coeffs_.size() != static_cast<size_t>(2 * degree_ + 1))
    throw std::invalid_argument("CircleFunction: coeffs.size() != 2*degree+1");
  for (const Complex& c : coeffs_)
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
      throw std::invalid_argument("CircleFunction: non-finite coefficient");
}

CircleFunction CircleFunction::constant(Complex c) {
  return CircleFunction(0, {c});
}

CircleFunction CircleFunction::monomial(int n, Complex c) {
  const int d = std::abs(n);
  std::vector<Complex> v(static_cast<size_t>(2 * d + 1), Complex(0.0, 0.0));
  v[static_cast<size_t>(n + d)] = c;
  return CircleFunction(d, std::move(v));
}

CircleFunction CircleFunction::from_map(const std::vector<std::pair<int, Complex>>& terms) {
  int d = 0;
  for (auto& [n, c] : terms) d = std::max(d, std::abs(n));
  std::vector<Complex> v(static_cast<size_t>(2 * d + 1), Complex(0.0, 0.0));
  for (auto& [n, c] : terms) v[static_cast<size_t>(n + d)] += c;
  return CircleFunction(d, std::move(v));
}

Complex CircleFunction::coeff(int n) const {
  if (std::abs(n) > degree_) return Complex(0.0, 0.0);
  return coeffs_[static_cast<size_t>(n + degree_)];
}

void CircleFunction::set_sampler(std::function<Complex(double)> s, bool authoritative) {
  sampler_ = std::move(s);
  sampler_authoritative_ = authoritative;
}

Complex CircleFunction::eval_coeffs(double t) const {
  // Horner in z = e^{it} over the shifted polynomial, then undo the z^degree
  const Complex z = std::polar(1.0, t);
  Complex acc = coeffs_.back();
  for (size_t k = coeffs_.size() - 1; k-- > 0;) acc = acc * z + coeffs_[k];
  return acc * std::polar(1.0, -static_cast<double>(degree_) * t);
}

Complex CircleFunction::eval(double t) const {
  if (sampler_authoritative_ && sampler_) return sampler_(t);
  return eval_coeffs(t);
}

CircleFunction CircleFunction::derivative() const {
  std::vector<Complex> v(coeffs_.size());
  for (int n = -degree_; n <= degree_; ++n)
    v[static_cast<size_t>(n + degree_)] =
        Complex(0.0, static_cast<double>(n)) * coeffs_[static_cast<size_t>(n + degree_)];
  return CircleFunction(degree_, std::move(v));
}

CircleFunction CircleFunction::scaled(Complex a) const {
  std::vector<Complex> v = coeffs_;
  for (auto& c : v) c *= a;
  CircleFunction g(degree_, std::move(v));
  return g;
}

CircleFunction CircleFunction::plus(const CircleFunction& g) const {
  const int d = std::max(degree_, g.degree_);
  std::vector<Complex> v(static_cast<size_t>(2 * d + 1), Complex(0.0, 0.0));
  for (int n = -d; n <= d; ++n) v[static_cast<size_t>(n + d)] = coeff(n) + g.coeff(n);
  return CircleFunction(d, std::move(v));
}

// ------------------------------ seminorms -----------------------------------

double sup_abs(const CircleFunction& f, double rel_gap) {
  if (!f.is_polynomial())
    throw std::invalid_argument("sup_abs: sampler-backed function");
  Series1D s;
  for (int n = -f.degree(); n <= f.degree(); ++n)
    if (f.coeff(n) != Complex(0.0, 0.0)) s.terms.push_back({n, f.coeff(n)});
  s.finalize();
  return certified_sup_1d(s, rel_gap).upper;
}

double lip_arc(const CircleFunction& f) {
  if (f.lip_arc_cache) return *f.lip_arc_cache;
  if (!f.is_polynomial()) {
    if (f.lip_hint) return *f.lip_hint;
    throw std::invalid_argument("lip_arc: sampler-only function without a Lipschitz hint");
  }
  return sup_abs(f.derivative(), 5e-10);
}

double lip_chordal(const CircleFunction& f) {
  if (f.lip_chordal_cache) return *f.lip_chordal_cache;
  if (!f.is_polynomial()) {
    if (f.lip_hint) return 0.5 * kPi * (*f.lip_hint);  // chord >= (2/pi) arc
    throw std::invalid_argument("lip_chordal: sampler-only function without a Lipschitz hint");
  }
  // Near the diagonal the symbol is controlled by the arc seminorm:
  // |f(e^{il}) - f(e^{im})| / |e^{il} - e^{im}| <= lip_arc * (sig / (2 sin(sig/2)))
  // at angular separation sig.  The branch & bound covers the rest.
  const double y_band = 1e-3;
  const double near_diag = lip_arc(f) * (y_band / std::sin(y_band));
  Series2D s = divided_difference_series(f);
  const SupResult far = certified_sup_2d(s, 1e-9, y_band);
  return std::max(far.upper, near_diag);
}

// ------------------------------ divided difference --------------------------

Complex divided_difference(const CircleFunction& f, double lambda, double mu,
                           double diag_tol) {
  const Complex z = std::polar(1.0, lambda);
  const Complex w = std::polar(1.0, mu);
  const Complex d = z - w;
  const double chord = std::abs(d);
  if (chord <= diag_tol) return Complex(0.0, 0.0);
  if (f.is_polynomial() && chord < 1e-3) {
    // cancellation-free sum form; canonical argument order keeps the result
    // exactly symmetric
    const double a = std::min(lambda, mu);
    const double b = std::max(lambda, mu);
    const Complex za = std::polar(1.0, a);
    const Complex zb = std::polar(1.0, b);
    Complex acc(0.0, 0.0);
    for (int n = -f.degree(); n <= f.degree(); ++n) {
      const Complex c = f.coeff(n);
      if (n == 0 || c == Complex(0.0, 0.0)) continue;
      if (n > 0) {
        const Complex step = za * std::conj(zb);
        Complex s(0.0, 0.0);
        Complex term = std::polar(1.0, (n - 1) * b);  // j = 0: za^0 zb^{n-1}
        for (int j = 0; j < n; ++j) {
          s += term;
          term *= step;
        }
        acc += c * s;
      } else {
        const int k = -n;
        // -sum_j za^{j-k} zb^{-1-j}
        const Complex step = za * std::conj(zb);
        Complex term = std::polar(1.0, -k * a) * std::conj(zb);  // j = 0
        Complex s(0.0, 0.0);
        for (int j = 0; j < k; ++j) {
          s += term;
          term *= step;
        }
        acc -= c * s;
      }
    }
    return acc;
  }
  return (f.eval(lambda) - f.eval(mu)) / d;
}

double weighted_coeff_sum(const CircleFunction& f) {
  double s = 0.0;
  for (int n = -f.degree(); n <= f.degree(); ++n)
    if (n != 0) s += std::abs(n) * std::abs(f.coeff(n));
  return s;
}

// ------------------------------ Jackson kernel ------------------------------

JacksonKernel jackson_kernel(int n_target) {
  if (n_target < 1) throw std::invalid_argument("jackson_kernel: target degree must be >= 1");
  const int m = n_target / 2 + 1;  // kernel degree 2m-2 <= n_target
  const int deg = 2 * m - 2;
  // (sin(Mt/2)/sin(t/2))^4 has coefficients given by the self-convolution of
  // the Fejer triangle (M - |j|); integer arithmetic, then normalize k(0)=1.
  std::vector<double> raw(static_cast<size_t>(deg + 1), 0.0);
  for (int n = 0; n <= deg; ++n) {
    double s = 0.0;
    for (int j = std::max(-(m - 1), n - (m - 1)); j <= std::min(m - 1, n + (m - 1)); ++j)
      s += static_cast<double>(m - std::abs(j)) * static_cast<double>(m - std::abs(n - j));
    raw[static_cast<size_t>(n)] = s;
  }
  JacksonKernel k;
  k.half_order = m;
  k.degree = deg;
  k.coeffs.resize(raw.size());
  for (size_t i = 0; i < raw.size(); ++i) k.coeffs[i] = raw[i] / raw[0];
  // exact first absolute moment by pairing with the Fourier series of |t|
  double m1 = 0.5 * kPi;
  for (int odd = 1; odd <= deg; odd += 2)
    m1 -= 4.0 / kPi * k.coeffs[static_cast<size_t>(odd)] / (static_cast<double>(odd) * odd);
  k.moment1 = m1;
  return k;
}

JacksonResult jackson_truncate(const PeriodicSampler& f, int n) {
  if (n < 1) throw std::invalid_argument("jackson_truncate: N must be >= 1");
  if (!f.sample && !f.fourier_coeff)
    throw std::invalid_argument("jackson_truncate: sampler required");
  if (!(f.lipschitz >= 0.0) || !std::isfinite(f.lipschitz))
    throw std::invalid_argument("jackson_truncate: invalid Lipschitz constant");

  const JacksonKernel k = jackson_kernel(n);
  const int deg = k.degree;
  std::vector<Complex> hat(static_cast<size_t>(2 * deg + 1), Complex(0.0, 0.0));
  double alias_err = 0.0;
  if (f.fourier_coeff) {
    for (int j = -deg; j <= deg; ++j)
      hat[static_cast<size_t>(j + deg)] = f.fourier_coeff(j);
  } else {
    // trapezoid coefficients; the aliasing certificate uses
    // sum_{j != 0} |f_hat(n + j m)| <= 2 L / (m - deg)  (l^2 tail bound for
    // Lipschitz f), summed over the 2*deg+1 coefficients we keep
    const int m = std::max(8192, 16 * deg);
    std::vector<Complex> samples(static_cast<size_t>(m));
    for (int j = 0; j < m; ++j) samples[static_cast<size_t>(j)] = f.sample(kTwoPi * j / m);
    for (int q = -deg; q <= deg; ++q) {
      Complex acc(0.0, 0.0);
      for (int j = 0; j < m; ++j)
        acc += samples[static_cast<size_t>(j)] * std::polar(1.0, -kTwoPi * q * j / m);
      hat[static_cast<size_t>(q + deg)] = acc / static_cast<double>(m);
    }
    alias_err = (2.0 * deg + 1.0) * 2.0 * f.lipschitz / static_cast<double>(m - deg);
  }

  // Band-limited samplers need no smoothing: when the raw coefficient table
  // already reproduces the sampler uniformly, return it undamped.  Otherwise
  // apply the kernel damping, whose sup-error certificate is L * moment1.
  JacksonResult r;
  if (f.sample) {
    CircleFunction raw(deg, hat);
    double grid_resid = 0.0, scale = 0.0;
    for (int j = 0; j < 4096; ++j) {
      const double t = kTwoPi * j / 4096;
      const Complex fv = f.sample(t);
      grid_resid = std::max(grid_resid, std::abs(fv - raw.eval_coeffs(t)));
      scale = std::max(scale, std::abs(fv));
    }
    if (grid_resid <= 1e-10 * (1.0 + scale)) {
      double b1 = 0.0;
      for (int j = -deg; j <= deg; ++j)
        b1 += std::abs(j) * std::abs(hat[static_cast<size_t>(j + deg)]);
      r.fn = std::move(raw);
      r.fn.id = f.name.empty() ? "jackson" : f.name;
      // off-grid excursions of sampler minus table are Lipschitz-bounded
      r.err_bound = grid_resid + (f.lipschitz + b1) * kPi / 4096 + alias_err;
      r.fn.trunc_err = r.err_bound;
      r.fn.set_sampler(f.sample, /*authoritative=*/false);
      return r;
    }
  }

  std::vector<Complex> out(static_cast<size_t>(2 * deg + 1));
  for (int j = -deg; j <= deg; ++j)
    out[static_cast<size_t>(j + deg)] =
        hat[static_cast<size_t>(j + deg)] * k.coeffs[static_cast<size_t>(std::abs(j))];

  r.fn = CircleFunction(deg, std::move(out));
  r.fn.id = f.name.empty() ? "jackson" : f.name;
  r.err_bound = f.lipschitz * k.moment1 * (1.0 + 1e-12) + alias_err;
  r.fn.trunc_err = r.err_bound;
  if (f.sample) r.fn.set_sampler(f.sample, /*authoritative=*/false);
  return r;
}

// ------------------------------ JSON ----------------------------------------

std::string circle_function_to_json(const CircleFunction& f) {
  if (!f.is_polynomial())
    throw std::invalid_argument("circle_function_to_json: sampler-backed function");
  nlohmann::json j;
  j["degree"] = f.degree();
  nlohmann::json coeffs = nlohmann::json::object();
  for (int n = -f.degree(); n <= f.degree(); ++n) {
    const Complex c = f.coeff(n);
    if (c != Complex(0.0, 0.0)) coeffs[std::to_string(n)] = {c.real(), c.imag()};
  }
  j["coeffs"] = std::move(coeffs);
  if (!f.id.empty()) j["zoo_name"] = f.id;
  return j.dump();
}

CircleFunction circle_function_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  const int deg = j.at("degree").get<int>();
  if (deg < 0) throw std::invalid_argument("circle_function_from_json: negative degree");
  std::vector<Complex> v(static_cast<size_t>(2 * deg + 1), Complex(0.0, 0.0));
  for (auto& [key, val] : j.at("coeffs").items()) {
    const int n = std::stoi(key);
    if (std::abs(n) > deg)
      throw std::invalid_argument("circle_function_from_json: coefficient outside degree");
    v[static_cast<size_t>(n + deg)] = Complex(val.at(0).get<double>(), val.at(1).get<double>());
  }
  CircleFunction f(deg, std::move(v));
  if (j.contains("zoo_name")) f.id = j["zoo_name"].get<std::string>();
  return f;
}

}  // namespace opcalc
