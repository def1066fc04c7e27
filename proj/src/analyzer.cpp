#include "tyche/analyzer.hpp"

#include <algorithm>
#include <cstdio>

#include <json.hpp>

namespace tyche {

std::set<OperationSig> functional_access(const std::vector<dsl::PermissionRequest>& requests,
                                         const Catalog& catalog) {
  std::set<OperationSig> ops;
  for (const auto& req : requests)
    for (auto& op : catalog.at(req.capability).operations()) ops.insert(std::move(op));
  return ops;
}

std::set<OperationSig> risk_access(const std::vector<dsl::PermissionRequest>& requests, const RiskTable& table,
                                   const Catalog& catalog) {
  std::set<OperationSig> ops;
  for (const auto& req : requests) {
    catalog.at(req.capability);
    for (auto& op : accessible_ops(table, req.capability, req.level)) ops.insert(std::move(op));
  }
  return ops;
}

AccessReport analyze_app(const std::string& app, const std::vector<dsl::PermissionRequest>& requests,
                         const RiskTable& table, const Catalog& catalog) {
  AccessReport r;
  r.app = app;
  r.requests = requests;
  r.functional_set = functional_access(requests, catalog);
  r.risk_set = risk_access(requests, table, catalog);
  for (const auto& op : r.functional_set)
    if (table.level_of(op) == RiskLevel::High) ++r.high_risk_functional;
  for (const auto& op : r.risk_set)
    if (table.level_of(op) == RiskLevel::High) ++r.high_risk_risk_based;
  return r;
}

double high_risk_reduction(const std::vector<AccessReport>& reports) {
  long functional = 0, risk_based = 0;
  for (const auto& r : reports) {
    functional += r.high_risk_functional;
    risk_based += r.high_risk_risk_based;
  }
  if (functional == 0)
    throw Error(ErrorKind::NoHighRiskBaseline, "no high-risk operations are reachable under functional grouping");
  return 100.0 * static_cast<double>(functional - risk_based) / static_cast<double>(functional);
}

namespace {

std::vector<std::string> names(const std::set<OperationSig>& ops, OperationKind kind) {
  std::vector<std::string> out;
  for (const auto& op : ops)
    if (op.kind == kind) out.push_back(op.display_name());
  std::sort(out.begin(), out.end());
  return out;
}

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ", ";
    out += items[i];
  }
  return out.empty() ? "-" : out;
}

std::string describe(const std::set<OperationSig>& ops) {
  return "attrs: " + join(names(ops, OperationKind::Attribute)) +
         ". cmds: " + join(names(ops, OperationKind::Command));
}

std::string percent(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f%%", v);
  return buf;
}

}  // namespace

std::string render_plain(const std::vector<AccessReport>& reports) {
  std::string out;
  for (const auto& r : reports) {
    std::vector<std::string> caps, risk;
    for (const auto& req : r.requests) {
      caps.push_back(req.capability);
      risk.push_back(req.capability + "." + std::string(request_suffix(req.level)));
    }
    out += "app " + r.app + "\n";
    out += "  functional permissions: " + join(caps) + "\n";
    out += "  functional access:      " + describe(r.functional_set) + "\n";
    out += "  risk-based permissions: " + join(risk) + "\n";
    out += "  risk-based access:      " + describe(r.risk_set) + "\n";
    out += "  high-risk operations:   functional " + std::to_string(r.high_risk_functional) + ", risk-based " +
           std::to_string(r.high_risk_risk_based) + "\n";
  }
  out += "high-risk reduction: " + percent(high_risk_reduction(reports)) + "\n";
  return out;
}

std::string render_json(const std::vector<AccessReport>& reports) {
  using nlohmann::json;
  auto split = [](const std::set<OperationSig>& ops) {
    return json{{"attrs", names(ops, OperationKind::Attribute)}, {"cmds", names(ops, OperationKind::Command)}};
  };
  json apps = json::array();
  for (const auto& r : reports) {
    json perms = json::array();
    for (const auto& req : r.requests)
      perms.push_back({{"binding", req.binding}, {"capability", req.capability}, {"level", to_string(req.level)}});
    apps.push_back({{"app", r.app},
                    {"permissions", perms},
                    {"functional", split(r.functional_set)},
                    {"risk_based", split(r.risk_set)},
                    {"high_risk_functional", r.high_risk_functional},
                    {"high_risk_risk_based", r.high_risk_risk_based}});
  }
  json doc{{"apps", apps}, {"high_risk_reduction", high_risk_reduction(reports)}};
  return doc.dump(2) + "\n";
}

}  // namespace tyche
