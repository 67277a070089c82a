#pragma once

#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "dnlab/forms.hpp"

namespace dnlab {

using Json = nlohmann::json;

/// Matrix as {"ids": [...], "rows": [[...], ...]}, row-major.
Json matrix_to_json(const Matrix& m, const std::vector<std::string>& ids);
Json vector_to_json(const Vector& v, const std::vector<std::string>& ids);

/// Report envelope shared by all CLI subcommands: inputs echo, results,
/// provenance (version/seed/timings) and per-assertion pass/fail entries.
class Report {
 public:
  explicit Report(std::string subcommand, std::uint64_t seed);

  void input(const std::string& key, const Json& value);
  void result(const std::string& key, const Json& value);
  void assertion(const std::string& name, bool pass,
                 const std::string& detail = "");
  void timing_ms(const std::string& key, double ms);

  bool all_assertions_pass() const { return failures_ == 0; }
  int failures() const { return failures_; }
  Json to_json() const;
  std::string dump() const;

 private:
  Json inputs_ = Json::object();
  Json results_ = Json::object();
  Json provenance_ = Json::object();
  Json timings_ = Json::object();
  Json assertions_ = Json::array();
  int failures_ = 0;
};

}  // namespace dnlab
