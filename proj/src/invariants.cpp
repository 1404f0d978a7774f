#include "vheap/invariants.hpp"

#include <nlohmann/json.hpp>

namespace vheap {

std::string audit_to_json(const AuditReport& report, const std::function<std::string(std::uint32_t)>& label) {
  nlohmann::ordered_json j;
  j["violations"] = nlohmann::ordered_json::array();
  for (const auto& v : report.violations) {
    nlohmann::ordered_json e;
    e["rule"] = v.rule;
    if (v.node == nil)
      e["node"] = nullptr;
    else if (label)
      e["node"] = label(v.node);
    else
      e["node"] = v.node;
    e["detail"] = v.detail;
    j["violations"].push_back(std::move(e));
  }
  j["nodes"] = report.nodes;
  j["max_rank"] = report.max_rank;
  return j.dump();
}

} // namespace vheap
