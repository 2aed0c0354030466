#include "opcalc/shift.hpp"

#include "opcalc/matrix_io.hpp"

#include <json.hpp>

#include <cmath>
#include <numbers>
#include <sstream>

namespace opcalc {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

ShiftFunction::ShiftFunction(int n_max, std::vector<Complex> coeffs)
    : n_max_(n_max), coeffs_(std::move(coeffs)) {
  if (n_max_ < 1) throw std::invalid_argument("ShiftFunction: N must be >= 1");
  if (coeffs_.size() != static_cast<size_t>(2 * n_max_ + 1))
    throw std::invalid_argument("ShiftFunction: coeffs.size() != 2N+1");
  coeffs_[static_cast<size_t>(n_max_)] = Complex(0.0, 0.0);  // gauge c(0) = 0
}

Complex ShiftFunction::coeff(int n) const {
  if (n == 0 || std::abs(n) > n_max_) return Complex(0.0, 0.0);
  return coeffs_[static_cast<size_t>(n + n_max_)];
}

Complex ShiftFunction::eval(double t) const {
  Complex acc(0.0, 0.0);
  for (int n = -n_max_; n <= n_max_; ++n)
    if (n != 0) acc += coeff(n) * std::polar(1.0, -n * t);
  return acc / kTwoPi;
}

double ShiftFunction::l1_grid_norm(int grid) const {
  double acc = 0.0;
  for (int j = 0; j < grid; ++j) acc += std::abs(eval(kTwoPi * j / grid));
  return acc * kTwoPi / grid;
}

Complex moment(const Contraction& t0, const Contraction& t1, const CMat& x, int n) {
  if (n == 0) throw std::invalid_argument("moment: n must be nonzero");
  if (x.rows() != t0.dim() || x.cols() != t0.dim() || t0.dim() != t1.dim())
    throw std::invalid_argument("moment: dimension mismatch");
  const int k = std::abs(n);
  CMat p0, p1;
  if (n > 0) {
    p0 = t0.mat();
    p1 = t1.mat();
  } else {
    p0 = t0.mat().adjoint();
    p1 = t1.mat().adjoint();
  }
  CMat a0 = p0, a1 = p1;
  for (int i = 1; i < k; ++i) {
    a0 = a0 * p0;
    a1 = a1 * p1;
  }
  return ((a1 - a0) * x).trace();
}

ShiftFunction eta_recover(const Contraction& t0, const Contraction& t1, const CMat& x,
                          int n_max, EtaRoute route) {
  if (n_max < 1) throw std::invalid_argument("eta_recover: N must be >= 1");
  std::vector<Complex> c(static_cast<size_t>(2 * n_max + 1), Complex(0.0, 0.0));

  if (route == EtaRoute::kMoments) {
    // incremental powers; c(n) = Tr[(T1^(n) - T0^(n)) X] / (i n)
    const CMat &m0 = t0.mat(), &m1 = t1.mat();
    CMat p0 = CMat::Identity(t0.dim(), t0.dim()), p1 = p0;
    CMat q0 = p0, q1 = p0;
    for (int n = 1; n <= n_max; ++n) {
      p0 = p0 * m0;
      p1 = p1 * m1;
      q0 = q0 * m0.adjoint();
      q1 = q1 * m1.adjoint();
      c[static_cast<size_t>(n + n_max)] =
          ((p1 - p0) * x).trace() / Complex(0.0, static_cast<double>(n));
      c[static_cast<size_t>(-n + n_max)] =
          ((q1 - q0) * x).trace() / Complex(0.0, static_cast<double>(-n));
    }
  } else {
    // dilation route: the same moments through compressions of finite
    // dilations of matching degree, with X embedded in the base block
    const FiniteDilation u0 = finite_dilation(t0, n_max);
    const FiniteDilation u1 = finite_dilation(t1, n_max);
    const CMat xb = u0.embed(x);
    CMat p0 = CMat::Identity(u0.u.rows(), u0.u.cols()), p1 = p0;
    CMat q0 = p0, q1 = p0;
    for (int n = 1; n <= n_max; ++n) {
      p0 = p0 * u0.u;
      p1 = p1 * u1.u;
      q0 = q0 * u0.u.adjoint();
      q1 = q1 * u1.u.adjoint();
      c[static_cast<size_t>(n + n_max)] =
          ((p1 - p0) * xb).trace() / Complex(0.0, static_cast<double>(n));
      c[static_cast<size_t>(-n + n_max)] =
          ((q1 - q0) * xb).trace() / Complex(0.0, static_cast<double>(-n));
    }
  }
  return ShiftFunction(n_max, std::move(c));
}

double trace_formula_check(const CircleFunction& f, const Contraction& t0,
                           const Contraction& t1, const CMat& x,
                           const ShiftFunction& eta) {
  if (!f.is_polynomial())
    throw std::invalid_argument("trace_formula_check: f must be a trig polynomial");
  if (f.degree() > eta.n_max())
    throw std::invalid_argument("trace_formula_check: degree(f) exceeds eta truncation");
  const CMat lhs_mat = calc_fourier(f, t1).value - calc_fourier(f, t0).value;
  const Complex lhs = (lhs_mat * x).trace();
  // int (d/dt f)(e^{it}) eta_N(t) dt = sum_n a_n (i n) c(n) by orthogonality
  Complex rhs(0.0, 0.0);
  for (int n = -f.degree(); n <= f.degree(); ++n) {
    if (n == 0) continue;
    rhs += f.coeff(n) * Complex(0.0, static_cast<double>(n)) * eta.coeff(n);
  }
  return std::abs(lhs - rhs);
}

double uniqueness_check(const ShiftFunction& eta1, const ShiftFunction& eta2) {
  if (eta1.n_max() != eta2.n_max())
    throw std::invalid_argument("uniqueness_check: truncation degrees differ");
  double dev = 0.0;
  for (int n = -eta1.n_max(); n <= eta1.n_max(); ++n)
    dev = std::max(dev, std::abs(eta1.coeff(n) - eta2.coeff(n)));
  return dev;
}

std::string shift_to_json(const ShiftFunction& eta) {
  nlohmann::json j;
  j["N"] = eta.n_max();
  nlohmann::json coeffs = nlohmann::json::object();
  for (int n = -eta.n_max(); n <= eta.n_max(); ++n) {
    if (n == 0) continue;
    const Complex c = eta.coeff(n);
    if (c != Complex(0.0, 0.0)) coeffs[std::to_string(n)] = {c.real(), c.imag()};
  }
  j["coeffs"] = std::move(coeffs);
  return j.dump();
}

ShiftFunction shift_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  const int n_max = j.at("N").get<int>();
  std::vector<Complex> c(static_cast<size_t>(2 * n_max + 1), Complex(0.0, 0.0));
  for (auto& [key, val] : j.at("coeffs").items()) {
    const int n = std::stoi(key);
    if (n == 0 || std::abs(n) > n_max)
      throw std::invalid_argument("shift_from_json: coefficient index out of range");
    c[static_cast<size_t>(n + n_max)] =
        Complex(val.at(0).get<double>(), val.at(1).get<double>());
  }
  return ShiftFunction(n_max, std::move(c));
}

std::string shift_plot_data(const ShiftFunction& eta, bool imag_part, int grid) {
  std::ostringstream out;
  for (int j = 0; j < grid; ++j) {
    const double t = kTwoPi * j / grid;
    const Complex v = eta.eval(t);
    out << render_double(t) << ' ' << render_double(imag_part ? v.imag() : v.real())
        << '\n';
  }
  return out.str();
}

}  // namespace opcalc
