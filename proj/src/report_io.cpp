#include "acmm/matrix_io.hpp"
#include "acmm/straggler_sim.hpp"

#include <ostream>

namespace acmm::sim {

std::string subset_to_string(const Subset& s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out += ' ';
    out += std::to_string(s[i]);
  }
  return out;
}

void write_report_csv(std::ostream& out, const SimReport& r) {
  out << "subset,max_entry_error,frobenius_error,declared_failure\n";
  for (const auto& o : r.per_subset)
    out << subset_to_string(o.subset) << ',' << io::format_double(o.max_entry_error) << ','
        << io::format_double(o.frobenius_error) << ',' << (o.declared_failure ? 1 : 0) << '\n';
}

nlohmann::json report_to_json(const SimReport& r) {
  nlohmann::json j;
  j["epsilon_measured"] = r.epsilon_measured;
  j["runtime_ms"] = r.runtime_ms;
  auto& rows = j["per_subset"] = nlohmann::json::array();
  for (const auto& o : r.per_subset)
    rows.push_back({{"subset", o.subset},
                    {"max_entry_error", o.max_entry_error},
                    {"frobenius_error", o.frobenius_error},
                    {"declared_failure", o.declared_failure}});
  return j;
}

void write_nsucc_csv(std::ostream& out, const std::string& codec, const std::vector<NsuccRow>& rows, bool header) {
  if (header) out << "codec,n_succ,subsets,failures,loss,epsilon_measured\n";
  for (const auto& r : rows)
    out << codec << ',' << r.n_succ << ',' << r.subsets << ',' << r.failures << ',' << io::format_double(r.loss) << ','
        << io::format_double(r.epsilon_measured) << '\n';
}

void write_gamma_csv(std::ostream& out, const std::vector<GammaRow>& rows, bool header) {
  if (header) out << "n_succ,gamma,epsilon_measured\n";
  for (const auto& r : rows) out << r.n_succ << ',' << io::format_double(r.gamma) << ',' << io::format_double(r.epsilon_measured) << '\n';
}

}  // namespace acmm::sim
