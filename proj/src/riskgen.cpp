#include "tyche/riskgen.hpp"

#include <cstdio>

namespace tyche {

RiskTable emit_risk_table(const ClusterResult& cluster, const Catalog& catalog) {
  std::vector<RiskEntry> entries;
  for (const auto& op : catalog.all_operations()) {
    auto it = cluster.assignment.find(op);
    if (it == cluster.assignment.end())
      throw Error(ErrorKind::CoverageGap, "clustering assigns no risk level to '" + op.id() + "'");
    entries.push_back({op, it->second, 0});
  }
  for (const auto& [op, _] : cluster.assignment)
    if (!catalog.contains(op)) throw Error(ErrorKind::UnknownOperation, "'" + op.id() + "' is not in the catalog");
  return RiskTable::from_entries(entries, catalog);
}

RiskgenResult derive_risk_table(std::vector<SurveyResponse> responses, const Catalog& catalog,
                                const RiskgenOptions& options) {
  RiskgenResult result;
  result.indicator = filter_indicator(std::move(responses));

  std::vector<SurveyResponse> kept;
  std::vector<SurveyResponse> crowd[2];
  for (auto& r : result.indicator.kept) {
    if (r.group == Group::Expert) kept.push_back(std::move(r));
    else crowd[r.group == Group::Informed ? 0 : 1].push_back(std::move(r));
  }
  result.indicator.kept.clear();
  for (auto& group : crowd) {
    if (group.empty()) continue;
    auto filtered = filter_chi_square(std::move(group), options.alpha);
    for (auto& r : filtered.kept) kept.push_back(std::move(r));
    for (auto& r : filtered.removed) result.chi_square.removed.push_back(std::move(r));
    for (auto& f : filtered.flagged) result.chi_square.flagged.push_back(std::move(f));
  }

  for (Group g : kAllGroups) {
    GroupSummary s{g, 0, std::nullopt, {}, {}};
    for (const auto& r : kept)
      if (r.group == g) ++s.participants;
    try {
      s.means = aggregate_means(kept, g, catalog);
      s.cluster = kmeans3(s.means);
    } catch (const Error& e) {
      if (g == options.group) throw;
      s.note = e.detail();
    }
    result.groups.push_back(std::move(s));
  }
  result.chi_square.kept = std::move(kept);

  for (std::size_t i = 0; i < result.groups.size(); ++i)
    for (std::size_t j = i + 1; j < result.groups.size(); ++j) {
      const auto& a = result.groups[i];
      const auto& b = result.groups[j];
      if (a.means.empty() || b.means.empty()) continue;
      std::vector<double> x, y;
      for (const auto& [op, m] : a.means) {
        x.push_back(m);
        y.push_back(b.means.at(op));
      }
      try {
        result.correlations.push_back({a.group, b.group, pearson_r(x, y), x.size()});
      } catch (const Error&) {
        // constant means in one group: no correlation to report
      }
    }

  for (const auto& s : result.groups)
    if (s.group == options.group) result.table = emit_risk_table(*s.cluster, catalog);
  return result;
}

namespace {

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

}  // namespace

std::string render_stats(const RiskgenResult& result) {
  std::string out;
  out += "filters: indicator removed " + std::to_string(result.indicator.removed.size()) +
         ", chi-square removed " + std::to_string(result.chi_square.removed.size()) + ", flagged " +
         std::to_string(result.chi_square.flagged.size()) + "\n";
  for (const auto& s : result.groups) {
    out += "group " + std::string(to_string(s.group)) + ": participants " + std::to_string(s.participants);
    if (!s.cluster) {
      out += ", not clustered (" + s.note + ")\n";
      continue;
    }
    const auto& c = *s.cluster;
    out += ", iterations " + std::to_string(c.iterations) + "\n";
    out += "  low " + std::to_string(c.counts[0]) + " [1.00, " + fixed(round2(c.cut_points[0]), 2) + ")\n";
    out += "  medium " + std::to_string(c.counts[1]) + " [" + fixed(round2(c.cut_points[0]), 2) + ", " +
           fixed(round2(c.cut_points[1]), 2) + ")\n";
    out += "  high " + std::to_string(c.counts[2]) + " [" + fixed(round2(c.cut_points[1]), 2) + ", 5.00]\n";
  }
  out += "pearson r:\n";
  for (const auto& c : result.correlations)
    out += "  " + std::string(to_string(c.a)) + " / " + std::string(to_string(c.b)) + " = " + fixed(c.r, 4) +
           " (n=" + std::to_string(c.n) + ")\n";
  return out;
}

}  // namespace tyche
