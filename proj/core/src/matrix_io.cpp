#include "opcalc/matrix_io.hpp"

#include <json.hpp>

#include <charconv>
#include <fstream>
#include <sstream>

namespace opcalc {

using nlohmann::json;

std::string render_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string matrix_to_json(const CMat& m) {
  require_finite(m, "matrix_to_json");
  // nlohmann serializes doubles with shortest round-trip rendering, which
  // is exactly the file-format contract.
  json j;
  j["rows"] = m.rows();
  j["cols"] = m.cols();
  json entries = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index jj = 0; jj < m.cols(); ++jj)
      entries.push_back({m(i, jj).real(), m(i, jj).imag()});
  j["entries"] = std::move(entries);
  return j.dump();
}

CMat matrix_from_json(const std::string& text) {
  json j = json::parse(text);
  const auto rows = j.at("rows").get<Eigen::Index>();
  const auto cols = j.at("cols").get<Eigen::Index>();
  if (rows <= 0 || cols <= 0)
    throw std::invalid_argument("matrix_from_json: rows/cols must be positive");
  const json& entries = j.at("entries");
  if (static_cast<Eigen::Index>(entries.size()) != rows * cols)
    throw std::invalid_argument("matrix_from_json: entries.len != rows*cols");
  CMat m(rows, cols);
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index jj = 0; jj < cols; ++jj, ++k) {
      const json& e = entries.at(static_cast<size_t>(k));
      if (!e.is_array() || e.size() != 2)
        throw std::invalid_argument("matrix_from_json: entry is not [re, im]");
      m(i, jj) = Complex(e.at(0).get<double>(), e.at(1).get<double>());
    }
  require_finite(m, "matrix_from_json");
  return m;
}

void save_matrix(const std::string& path, const CMat& m) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("save_matrix: cannot open " + path);
  out << matrix_to_json(m) << '\n';
  if (!out) throw std::runtime_error("save_matrix: write failed for " + path);
}

CMat load_matrix(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("load_matrix: cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return matrix_from_json(ss.str());
}

}  // namespace opcalc
