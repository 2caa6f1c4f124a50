#include "qcy/report.hpp"

namespace qcy {

Json RunReport::to_json() const {
  Json j;
  j["command"] = command;
  j["version"] = kToolVersion;
  j["seed"] = seed;
  j["field"] = field;
  if (!stable_output) j["elapsed_ms"] = elapsed_ms;
  j["results"] = results;
  Json a = Json::array();
  for (auto& [name, ok] : audits) a.push_back(Json{{"check", name}, {"ok", ok}});
  j["audit"] = a;
  j["audit_ok"] = all_audits_pass();
  return j;
}

}  // namespace qcy
