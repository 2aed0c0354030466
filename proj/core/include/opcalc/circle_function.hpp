// circle_function.hpp — functions on the unit circle held as finite Fourier
// coefficient tables, with certified Lipschitz seminorms in both the arc and
// chord metrics, divided differences, and Jackson-kernel truncation of
// sampled functions with a sup-norm error certificate.

#pragma once

#include "opcalc/linalg.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace opcalc {

class CircleFunction {
 public:
  CircleFunction();  // the zero function, degree 0

  // coeffs[k] is the coefficient of e^{i(k-degree)t}, k = 0..2*degree
  CircleFunction(int degree, std::vector<Complex> coeffs);

  static CircleFunction constant(Complex c);
  static CircleFunction monomial(int n, Complex c = 1.0);  // c z^n, n may be negative
  static CircleFunction from_map(const std::vector<std::pair<int, Complex>>& terms);

  int degree() const { return degree_; }
  Complex coeff(int n) const;  // 0 outside |n| <= degree
  bool is_polynomial() const { return !sampler_authoritative_; }

  // pointwise sampler for closed-form (non-polynomial) functions; when the
  // flag is set the sampler is the authority for eval()
  void set_sampler(std::function<Complex(double)> s, bool authoritative);
  bool has_sampler() const { return static_cast<bool>(sampler_); }

  Complex eval(double t) const;          // value at e^{it}
  Complex eval_coeffs(double t) const;   // coefficient-table evaluation only
  CircleFunction derivative() const;     // d/dt f(e^{it}), a trig polynomial

  CircleFunction scaled(Complex a) const;
  CircleFunction plus(const CircleFunction& g) const;

  // metadata
  std::string id;              // zoo / report identifier
  double trunc_err = 0.0;      // certified sup-distance to a truncated original
  std::optional<double> lip_arc_cache;
  std::optional<double> lip_chordal_cache;
  std::optional<double> lip_hint;  // caller-certified Lipschitz bound (samplers)

 private:
  int degree_;
  std::vector<Complex> coeffs_;
  std::function<Complex(double)> sampler_;
  bool sampler_authoritative_ = false;
};

// ------------------------------ seminorms -----------------------------------

// sup_t |f(e^{it})| with a branch-and-bound certificate (upper bound within
// rel_gap of the true sup for trig polynomials)
double sup_abs(const CircleFunction& f, double rel_gap = 1e-9);

// sup_t |d/dt f(e^{it})|  (the paper-normalized Lipschitz seminorm over
// arclength).  Certified upper bound for trig polynomials; sampler-only
// functions must carry lip_hint.
double lip_arc(const CircleFunction& f);

// sup over pairs of |f(z)-f(w)| / |z-w| (chordal), equal to the sup of the
// divided-difference symbol.  Same certificate contract as lip_arc.
double lip_chordal(const CircleFunction& f);

// ------------------------------ divided difference --------------------------

// (f(e^{il}) - f(e^{im})) / (e^{il} - e^{im}); 0 when the chord length is at
// most diag_tol.  Exactly symmetric in (l, m).  For trig polynomials with a
// small chord the evaluation switches to the cancellation-free sum form.
Complex divided_difference(const CircleFunction& f, double lambda, double mu,
                           double diag_tol = 1e-12);

// sum_{n != 0} |n f_hat(n)|
double weighted_coeff_sum(const CircleFunction& f);

// ------------------------------ Jackson truncation --------------------------

// A 2pi-periodic sampled function with a caller-certified arc-Lipschitz
// constant; exact Fourier coefficients may be supplied in closed form.
struct PeriodicSampler {
  std::function<Complex(double)> sample;
  double lipschitz = 0.0;
  std::function<Complex(int)> fourier_coeff;  // optional, exact when present
  std::string name;
};

struct JacksonKernel {
  int half_order = 0;          // M; kernel degree is 2M-2
  int degree = 0;
  std::vector<double> coeffs;  // k_hat(0..degree), symmetric
  double moment1 = 0.0;        // (1/2pi) int |t| K(t) dt, exact
};

// Kernel of largest degree <= n_target (n_target >= 1).
JacksonKernel jackson_kernel(int n_target);

struct JacksonResult {
  CircleFunction fn;
  double err_bound = 0.0;  // certified >= sup |f - J_N f|
};

// Degree <= N trig polynomial J_N f by Jackson-kernel convolution.  The
// certificate is L * moment1 (plus an aliasing term when coefficients come
// from grid quadrature rather than the exact closure); N * moment1 <= 3 for
// every N, the kernel constant documented as C_J.
JacksonResult jackson_truncate(const PeriodicSampler& f, int n);

// ------------------------------ JSON ----------------------------------------

std::string circle_function_to_json(const CircleFunction& f);
CircleFunction circle_function_from_json(const std::string& text);

}  // namespace opcalc
