#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tyche/risk_table.hpp"
#include "tyche/stats.hpp"
#include "tyche/survey.hpp"

namespace tyche {

/// Builds a risk table from a clustering. Throws CoverageGap when a catalog
/// operation has no assigned level.
RiskTable emit_risk_table(const ClusterResult& cluster, const Catalog& catalog);

struct CorrelationReport {
  Group a;
  Group b;
  double r = 0;
  std::size_t n = 0;
};

struct GroupSummary {
  Group group;
  std::size_t participants = 0;
  std::optional<ClusterResult> cluster;  // empty when the group cannot be clustered
  std::map<OperationSig, double> means;
  std::string note;
};

struct RiskgenOptions {
  double alpha = 0.05;
  Group group = Group::Expert;
};

struct RiskgenResult {
  RiskTable table;
  FilterResult indicator;
  FilterResult chi_square;
  std::vector<GroupSummary> groups;
  std::vector<CorrelationReport> correlations;
};

/// Survey responses to risk table: indicator filter on everyone, the
/// chi-square random-clicker filter on each crowd group (experts are not
/// filtered), per-group means, K=3 clustering, and pairwise correlations.
/// The table comes from the clustering of `options.group`.
RiskgenResult derive_risk_table(std::vector<SurveyResponse> responses, const Catalog& catalog,
                                const RiskgenOptions& options = {});

/// Per-group counts, cut points and the pairwise r matrix.
std::string render_stats(const RiskgenResult& result);

}  // namespace tyche
