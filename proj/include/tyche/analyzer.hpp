#pragma once

#include <set>
#include <string>
#include <vector>

#include "tyche/ast.hpp"
#include "tyche/risk_table.hpp"

namespace tyche {

/// Operations an app can reach under capability-wide grants versus risk-based grants.
struct AccessReport {
  std::string app;
  std::vector<dsl::PermissionRequest> requests;
  std::set<OperationSig> functional_set;
  std::set<OperationSig> risk_set;
  int high_risk_functional = 0;
  int high_risk_risk_based = 0;
};

/// Every operation of every requested capability; risk annotations ignored.
std::set<OperationSig> functional_access(const std::vector<dsl::PermissionRequest>& requests,
                                         const Catalog& catalog);

/// Union of accessible_ops(table, capability, level) over the requests.
std::set<OperationSig> risk_access(const std::vector<dsl::PermissionRequest>& requests, const RiskTable& table,
                                   const Catalog& catalog);

AccessReport analyze_app(const std::string& app, const std::vector<dsl::PermissionRequest>& requests,
                         const RiskTable& table, const Catalog& catalog);

/// 100 * (functional high-risk total - risk-based high-risk total) / functional
/// total, with per-app distinct counts summed across apps. Throws
/// NoHighRiskBaseline when the functional total is zero.
double high_risk_reduction(const std::vector<AccessReport>& reports);

/// Per-app permissions and accessible attributes/commands under both models,
/// followed by the `high-risk reduction: X%` line.
std::string render_plain(const std::vector<AccessReport>& reports);
std::string render_json(const std::vector<AccessReport>& reports);

}  // namespace tyche
