#include "dnlab/report.hpp"

namespace dnlab {

Json matrix_to_json(const Matrix& m, const std::vector<std::string>& ids) {
  Json rows = Json::array();
  for (int r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (int c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return Json{{"ids", ids}, {"rows", rows}};
}

Json vector_to_json(const Vector& v, const std::vector<std::string>& ids) {
  Json vals = Json::array();
  for (int i = 0; i < v.size(); ++i) vals.push_back(v[i]);
  return Json{{"ids", ids}, {"values", vals}};
}

Report::Report(std::string subcommand, std::uint64_t seed) {
  provenance_["tool"] = "dn";
  provenance_["version"] = "0.1.0";
  provenance_["subcommand"] = std::move(subcommand);
  provenance_["seed"] = seed;
}

void Report::input(const std::string& key, const Json& value) {
  inputs_[key] = value;
}

void Report::result(const std::string& key, const Json& value) {
  results_[key] = value;
}

void Report::assertion(const std::string& name, bool pass,
                       const std::string& detail) {
  Json entry{{"name", name}, {"pass", pass}};
  if (!detail.empty()) entry["detail"] = detail;
  assertions_.push_back(std::move(entry));
  if (!pass) ++failures_;
}

void Report::timing_ms(const std::string& key, double ms) {
  timings_[key] = ms;
}

Json Report::to_json() const {
  Json p = provenance_;
  if (!timings_.empty()) p["timings_ms"] = timings_;
  Json out{{"inputs", inputs_}, {"results", results_}, {"provenance", p}};
  if (!assertions_.empty()) out["assertions"] = assertions_;
  return out;
}

std::string Report::dump() const { return to_json().dump(2) + "\n"; }

}  // namespace dnlab
