#include "acmm/coded_logreg.hpp"
#include "acmm/errors.hpp"

#include <fmt/format.h>

#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <string>

namespace acmm::logreg {

namespace {

bool parse_row(const std::string& line, std::vector<double>& out) {
  out.clear();
  const char* p = line.data();
  const char* end = p + line.size();
  while (end > p && (end[-1] == '\r' || end[-1] == ' ')) --end;
  while (p < end) {
    while (p < end && *p == ' ') ++p;
    double v = 0;
    auto [next, ec] = std::from_chars(p, end, v);
    if (ec != std::errc()) return false;
    out.push_back(v);
    p = next;
    while (p < end && *p == ' ') ++p;
    if (p < end) {
      if (*p != ',') return false;
      ++p;
    }
  }
  return !out.empty();
}

std::uint32_t read_be32(std::istream& in) {
  std::array<unsigned char, 4> b{};
  in.read(reinterpret_cast<char*>(b.data()), 4);
  if (!in) throw FormatError("truncated IDX header");
  return (std::uint32_t{b[0]} << 24) | (std::uint32_t{b[1]} << 16) | (std::uint32_t{b[2]} << 8) | b[3];
}

}  // namespace

Dataset load_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<std::vector<double>> rows;
  std::vector<double> row;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!parse_row(line, row)) {
      if (first) {  // header
        first = false;
        continue;
      }
      throw FormatError("bad CSV row: " + line);
    }
    first = false;
    if (!rows.empty() && row.size() != rows.front().size()) throw FormatError("CSV rows differ in length");
    if (row.size() < 2) throw FormatError("CSV rows need a label and at least one feature");
    rows.push_back(row);
  }
  if (rows.empty()) throw FormatError("no data rows in " + path.string());
  const auto F = static_cast<Eigen::Index>(rows.front().size() - 1);
  Matrix X(F, static_cast<Eigen::Index>(rows.size()));
  std::vector<int> labels;
  int J = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const double l = rows[i][0];
    if (l < 0 || l != std::floor(l)) throw FormatError("labels must be non-negative integers");
    labels.push_back(static_cast<int>(l));
    J = std::max(J, labels.back() + 1);
    for (Eigen::Index f = 0; f < F; ++f) X(f, static_cast<Eigen::Index>(i)) = rows[i][static_cast<std::size_t>(f) + 1];
  }
  return from_labels(std::move(X), labels, std::max(J, 2));
}

Dataset load_mnist(const std::filesystem::path& images, const std::filesystem::path& labels_path, int limit) {
  std::ifstream im(images, std::ios::binary), lb(labels_path, std::ios::binary);
  if (!im) throw IoError("cannot open " + images.string());
  if (!lb) throw IoError("cannot open " + labels_path.string());
  if (read_be32(im) != 0x00000803) throw FormatError("bad IDX image magic in " + images.string());
  if (read_be32(lb) != 0x00000801) throw FormatError("bad IDX label magic in " + labels_path.string());
  const std::uint32_t n = read_be32(im), rows = read_be32(im), cols = read_be32(im);
  if (read_be32(lb) != n) throw FormatError("image and label counts differ");
  const int count = limit > 0 ? std::min<int>(limit, static_cast<int>(n)) : static_cast<int>(n);
  const auto F = static_cast<Eigen::Index>(rows) * cols;
  Matrix X(F, count);
  std::vector<unsigned char> pix(static_cast<std::size_t>(F));
  std::vector<int> labels(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    im.read(reinterpret_cast<char*>(pix.data()), static_cast<std::streamsize>(pix.size()));
    char l = 0;
    lb.read(&l, 1);
    if (!im || !lb) throw FormatError("truncated IDX data");
    for (Eigen::Index f = 0; f < F; ++f) X(f, i) = pix[static_cast<std::size_t>(f)] / 255.0;
    labels[static_cast<std::size_t>(i)] = static_cast<unsigned char>(l);
  }
  return from_labels(std::move(X), labels, 10);
}

Split load_mnist_dir(const std::filesystem::path& dir, int train_limit, int test_limit) {
  return {load_mnist(dir / "train-images-idx3-ubyte", dir / "train-labels-idx1-ubyte", train_limit),
          load_mnist(dir / "t10k-images-idx3-ubyte", dir / "t10k-labels-idx1-ubyte", test_limit)};
}

}  // namespace acmm::logreg
