#include "opcalc/zoo.hpp"

#include "opcalc/rng.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace opcalc::zoo {

namespace {
constexpr double kPi = std::numbers::pi;
}

PeriodicSampler abs_im_sampler() {
  PeriodicSampler s;
  s.name = "|Im|";
  s.sample = [](double t) { return Complex(std::abs(std::sin(t)), 0.0); };
  s.lipschitz = 1.0;
  // |sin t| = 2/pi - (4/pi) sum_{even k>=2} cos(kt)/(k^2-1)
  s.fourier_coeff = [](int n) {
    const int k = std::abs(n);
    if (k == 0) return Complex(2.0 / kPi, 0.0);
    if (k % 2 != 0) return Complex(0.0, 0.0);
    return Complex(-2.0 / (kPi * (static_cast<double>(k) * k - 1.0)), 0.0);
  };
  return s;
}

PeriodicSampler sawtooth_sampler() {
  PeriodicSampler s;
  s.name = "saw";
  s.sample = [](double t) {
    double u = std::fmod(t, 2.0 * kPi);
    if (u < 0) u += 2.0 * kPi;
    return Complex(std::min(u, 2.0 * kPi - u), 0.0);
  };
  s.lipschitz = 1.0;
  // dist(t, 2pi Z) = pi/2 - (4/pi) sum_{odd k} cos(kt)/k^2
  s.fourier_coeff = [](int n) {
    const int k = std::abs(n);
    if (k == 0) return Complex(kPi / 2.0, 0.0);
    if (k % 2 == 0) return Complex(0.0, 0.0);
    return Complex(-2.0 / (kPi * static_cast<double>(k) * k), 0.0);
  };
  return s;
}

CircleFunction monomial(int n) {
  CircleFunction f = CircleFunction::monomial(n);
  f.id = "z^" + std::to_string(n);
  return f;
}

CircleFunction re_z() {
  CircleFunction f = CircleFunction::from_map({{1, 0.5}, {-1, 0.5}});
  f.id = "Re";
  return f;
}

CircleFunction im_z() {
  CircleFunction f =
      CircleFunction::from_map({{1, Complex(0.0, -0.5)}, {-1, Complex(0.0, 0.5)}});
  f.id = "Im";
  return f;
}

CircleFunction abs_im_truncated(int n) {
  JacksonResult r = jackson_truncate(abs_im_sampler(), n);
  r.fn.id = "|Im|~" + std::to_string(n);
  return r.fn;
}

CircleFunction sawtooth_truncated(int n) {
  JacksonResult r = jackson_truncate(sawtooth_sampler(), n);
  r.fn.id = "saw~" + std::to_string(n);
  return r.fn;
}

CircleFunction random_poly(std::uint64_t seed, int degree) {
  if (degree < 1) throw std::invalid_argument("random_poly: degree must be >= 1");
  Rng rng(mix_seed(0x5a0075fULL, mix_seed(seed, static_cast<std::uint64_t>(degree))));
  std::vector<Complex> v(static_cast<size_t>(2 * degree + 1));
  for (int n = -degree; n <= degree; ++n) {
    const double w = 1.0 / (1.0 + static_cast<double>(n) * n);
    v[static_cast<size_t>(n + degree)] = w * rng.cnormal();
  }
  CircleFunction f(degree, std::move(v));
  f.id = "rand-" + std::to_string(seed) + "-d" + std::to_string(degree);
  return f;
}

namespace {

CircleFunction build_by_id(const std::string& id) {
  if (id == "Re") return re_z();
  if (id == "Im") return im_z();
  if (id.rfind("z^", 0) == 0) return monomial(std::stoi(id.substr(2)));
  if (id.rfind("|Im|~", 0) == 0) return abs_im_truncated(std::stoi(id.substr(5)));
  if (id.rfind("saw~", 0) == 0) return sawtooth_truncated(std::stoi(id.substr(4)));
  if (id.rfind("rand-", 0) == 0) {
    const auto dpos = id.find("-d");
    if (dpos != std::string::npos) {
      const std::uint64_t seed = std::stoull(id.substr(5, dpos - 5));
      const int degree = std::stoi(id.substr(dpos + 2));
      return random_poly(seed, degree);
    }
  }
  throw std::invalid_argument("zoo::by_id: unknown function id '" + id + "'");
}

}  // namespace

CircleFunction by_id(const std::string& id) {
  // the seminorm certificates are branch-and-bound searches, so cache each
  // zoo entry with its certificates filled in
  static std::mutex mu;
  static std::map<std::string, CircleFunction> memo;
  std::lock_guard<std::mutex> lock(mu);
  auto it = memo.find(id);
  if (it == memo.end()) {
    CircleFunction f = build_by_id(id);
    f.lip_arc_cache = lip_arc(f);
    f.lip_chordal_cache = lip_chordal(f);
    it = memo.emplace(id, std::move(f)).first;
  }
  return it->second;
}

std::vector<std::string> default_ids(int max_degree) {
  const int trunc = std::min(max_degree, 24);
  return {
      "z^1",  "z^2",  "z^3",  "z^8",
      "z^-1", "z^-3", "Re",   "Im",
      "|Im|~" + std::to_string(trunc),
      "saw~" + std::to_string(trunc),
      "rand-1-d6", "rand-2-d12",
  };
}

}  // namespace opcalc::zoo
