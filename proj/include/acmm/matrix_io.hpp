#pragma once

#include "acmm/types.hpp"

#include <filesystem>
#include <iosfwd>

namespace acmm::io {

// CSV: a "rows,cols" line, then one comma-separated line per row.  Values
// are written in shortest round-trip form, so write/read is bit-exact.
void write_matrix_csv(std::ostream& out, const Matrix& A);
Matrix read_matrix_csv(std::istream& in);

// Binary: "ACMM", u32 rows, u32 cols, row-major little-endian f64.
void write_matrix_binary(std::ostream& out, const Matrix& A);
Matrix read_matrix_binary(std::istream& in);

// Format chosen by the leading magic.  Throws IoError / FormatError.
Matrix read_matrix(const std::filesystem::path& path);
// Binary when the extension is .bin, CSV otherwise.
void write_matrix(const std::filesystem::path& path, const Matrix& A);

std::string format_double(double x);

}  // namespace acmm::io
