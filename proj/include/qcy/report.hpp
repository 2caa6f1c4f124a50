#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "qcy/field.hpp"

namespace qcy {

using Json = nlohmann::json;

inline const char* kToolVersion = "0.1.0";

/*
 * One run, one report. With stable output enabled the JSON is
 * byte-reproducible for fixed seed and inputs (timings are omitted and all
 * numbers are integers or strings).
 */
struct RunReport {
  std::string command;
  uint64_t seed = 0;
  std::string field;
  bool stable_output = false;
  double elapsed_ms = 0;
  Json results = Json::object();
  std::vector<std::pair<std::string, bool>> audits;

  void audit(const std::string& name, bool ok) { audits.emplace_back(name, ok); }
  bool all_audits_pass() const {
    for (auto& [n, ok] : audits)
      if (!ok) return false;
    return true;
  }
  Json to_json() const;
  std::string dump() const { return to_json().dump(2) + "\n"; }
};

}  // namespace qcy
