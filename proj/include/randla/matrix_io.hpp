#pragma once

#include <iosfwd>
#include <string>

#include "randla/matrix.hpp"

namespace randla::io {

/// Matrix Market dense array format, "real general". The writer emits
/// 17 significant digits so a write/read round trip is bit-exact.
void write_matrix_market(std::ostream& os, const Matrix& m);
Matrix read_matrix_market(std::istream& is);

void write_matrix_market(const std::string& path, const Matrix& m);
Matrix read_matrix_market(const std::string& path);

/// Headerless CSV, one matrix row per line.
void write_csv(std::ostream& os, const Matrix& m);
Matrix read_csv(std::istream& is);

void write_csv(const std::string& path, const Matrix& m);
Matrix read_csv(const std::string& path);

} // namespace randla::io
