#include "acmm/matrix_io.hpp"

#include "acmm/errors.hpp"

#include <array>
#include <bit>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

namespace acmm::io {

namespace {

constexpr std::array<char, 4> kMagic{'A', 'C', 'M', 'M'};

static_assert(std::endian::native == std::endian::little, "binary matrix format assumes a little-endian host");

double parse_double(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  double v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw FormatError("bad number '" + std::string(s) + "'");
  return v;
}

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    auto pos = line.find(',', start);
    out.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

long parse_dim(std::string_view s) {
  const double d = parse_double(s);
  if (d < 0 || d != static_cast<double>(static_cast<long>(d))) throw FormatError("bad dimension");
  return static_cast<long>(d);
}

}  // namespace

std::string format_double(double x) {
  std::array<char, 32> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return std::string(buf.data(), ptr);
}

void write_matrix_csv(std::ostream& out, const Matrix& A) {
  out << A.rows() << ',' << A.cols() << '\n';
  for (Eigen::Index i = 0; i < A.rows(); ++i) {
    for (Eigen::Index j = 0; j < A.cols(); ++j) {
      if (j) out << ',';
      out << format_double(A(i, j));
    }
    out << '\n';
  }
}

Matrix read_matrix_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw FormatError("empty matrix file");
  auto dims = split_commas(line);
  if (dims.size() != 2) throw FormatError("first line must be 'rows,cols'");
  const long rows = parse_dim(dims[0]), cols = parse_dim(dims[1]);
  Matrix A(rows, cols);
  for (long i = 0; i < rows; ++i) {
    if (!std::getline(in, line)) throw FormatError("matrix file ends after " + std::to_string(i) + " rows");
    auto cells = split_commas(line);
    if (static_cast<long>(cells.size()) != cols) throw FormatError("row " + std::to_string(i) + " has the wrong column count");
    for (long j = 0; j < cols; ++j) A(i, j) = parse_double(cells[j]);
  }
  return A;
}

void write_matrix_binary(std::ostream& out, const Matrix& A) {
  out.write(kMagic.data(), kMagic.size());
  const auto rows = static_cast<std::uint32_t>(A.rows()), cols = static_cast<std::uint32_t>(A.cols());
  out.write(reinterpret_cast<const char*>(&rows), sizeof rows);
  out.write(reinterpret_cast<const char*>(&cols), sizeof cols);
  for (Eigen::Index i = 0; i < A.rows(); ++i)
    for (Eigen::Index j = 0; j < A.cols(); ++j) {
      const double v = A(i, j);
      out.write(reinterpret_cast<const char*>(&v), sizeof v);
    }
}

Matrix read_matrix_binary(std::istream& in) {
  std::array<char, 4> magic{};
  std::uint32_t rows = 0, cols = 0;
  in.read(magic.data(), magic.size());
  if (!in || magic != kMagic) throw FormatError("missing ACMM magic");
  in.read(reinterpret_cast<char*>(&rows), sizeof rows);
  in.read(reinterpret_cast<char*>(&cols), sizeof cols);
  if (!in) throw FormatError("truncated header");
  Matrix A(rows, cols);
  for (std::uint32_t i = 0; i < rows; ++i)
    for (std::uint32_t j = 0; j < cols; ++j) {
      double v;
      in.read(reinterpret_cast<char*>(&v), sizeof v);
      if (!in) throw FormatError("truncated matrix data");
      A(i, j) = v;
    }
  return A;
}

Matrix read_matrix(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::array<char, 4> head{};
  in.read(head.data(), head.size());
  in.clear();
  in.seekg(0);
  if (head == kMagic) return read_matrix_binary(in);
  return read_matrix_csv(in);
}

void write_matrix(const std::filesystem::path& path, const Matrix& A) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  if (path.extension() == ".bin")
    write_matrix_binary(out, A);
  else
    write_matrix_csv(out, A);
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace acmm::io
