// matrix_io.hpp — JSON matrix files: {"rows": r, "cols": c,
// "entries": [[re, im], ...]} in row-major order.  Serialization uses
// shortest round-trip decimal rendering so 64-bit floats survive a
// write/read cycle bit-exactly.

#pragma once

#include "opcalc/linalg.hpp"

#include <string>

namespace opcalc {

std::string matrix_to_json(const CMat& m);
CMat matrix_from_json(const std::string& text);

void save_matrix(const std::string& path, const CMat& m);
CMat load_matrix(const std::string& path);

// shortest round-trip decimal rendering of a double (also used by the
// campaign CSV writers)
std::string render_double(double v);

}  // namespace opcalc
