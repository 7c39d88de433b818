#include "acmm/code_search.hpp"
#include "acmm/errors.hpp"

#include <algorithm>
#include <fstream>

namespace acmm::search {

namespace {

std::vector<double> row_major(const Matrix& M) {
  std::vector<double> v;
  v.reserve(static_cast<std::size_t>(M.size()));
  for (Eigen::Index i = 0; i < M.rows(); ++i)
    for (Eigen::Index j = 0; j < M.cols(); ++j) v.push_back(M(i, j));
  return v;
}

Matrix from_row_major(const std::vector<double>& v, int rows, int cols) {
  if (v.size() != static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols))
    throw FormatError("coefficient array has the wrong length");
  Matrix M(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) M(i, j) = v[static_cast<std::size_t>(i * cols + j)];
  return M;
}

}  // namespace

nlohmann::json to_json(const GeneralLinearCode& c) {
  nlohmann::json j;
  j["m"] = c.params.m;
  j["k"] = c.params.k;
  j["P"] = c.params.P;
  j["epsilon"] = c.params.epsilon;
  j["eta"] = c.params.eta;
  j["A_coeffs"] = row_major(c.A_coeffs);
  j["B_coeffs"] = row_major(c.B_coeffs);
  auto& decs = j["decoders"] = nlohmann::json::array();
  const auto S = c.scenarios();
  for (std::size_t p = 0; p < S.size(); ++p)
    decs.push_back({{"subset", S[p]}, {"d", std::vector<double>(c.decoders[p].begin(), c.decoders[p].end())}});
  j["loss"] = loss(c).total;
  return j;
}

GeneralLinearCode code_from_json(const nlohmann::json& j) {
  try {
    GeneralLinearCode c;
    const int m = j.at("m").get<int>();
    c.params = CodeParams::matdot(m, j.at("P").get<int>(), j.at("k").get<int>(), j.value("epsilon", 1e-2),
                                  j.value("eta", 1.0));
    c.A_coeffs = from_row_major(j.at("A_coeffs").get<std::vector<double>>(), m, c.params.P);
    c.B_coeffs = from_row_major(j.at("B_coeffs").get<std::vector<double>>(), m, c.params.P);
    c.decoders.assign(static_cast<std::size_t>(binomial(c.params.P, c.params.k)), Vector());
    std::vector<bool> seen(c.decoders.size(), false);
    for (const auto& e : j.at("decoders")) {
      const auto s = e.at("subset").get<Subset>();
      if (static_cast<int>(s.size()) != c.params.k) throw FormatError("decoder subset has the wrong size");
      const auto idx = static_cast<std::size_t>(scenario_index(s, c.params.P));
      const auto d = e.at("d").get<std::vector<double>>();
      c.decoders[idx] = Eigen::Map<const Vector>(d.data(), static_cast<Eigen::Index>(d.size()));
      seen[idx] = true;
    }
    if (std::find(seen.begin(), seen.end(), false) != seen.end()) throw FormatError("missing decoder for some scenario");
    c.validate();
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("bad code JSON: ") + e.what());
  } catch (const Error& e) {
    throw FormatError(std::string("bad code JSON: ") + e.what());
  }
}

void save_code(const std::filesystem::path& path, const GeneralLinearCode& code) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << to_json(code).dump(2) << '\n';
}

GeneralLinearCode load_code(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("bad code JSON: ") + e.what());
  }
  return code_from_json(j);
}

}  // namespace acmm::search
