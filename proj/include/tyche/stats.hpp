#pragma once

#include <array>
#include <map>
#include <span>
#include <vector>

#include "tyche/capability.hpp"

namespace tyche {

struct ChiSquareResult {
  double statistic = 0;
  int dof = 0;
  double p_value = 1;
};

/// Pearson's chi-square test of independence on a 2 x K contingency table.
/// Adjacent columns are pooled left to right until every expected count is
/// at least 5 (a short tail joins the previous group). Fewer than two pooled
/// columns gives dof 0 and p = 1.
ChiSquareResult chi_square_independence(const std::array<std::vector<int>, 2>& table);

/// Pearson product-moment correlation. Throws LengthMismatch or ConstantVector.
double pearson_r(std::span<const double> x, std::span<const double> y);

/// 1-D three-cluster partition of a list of values.
struct ValueClustering {
  std::vector<int> labels;  // 0 = lowest-centroid cluster
  std::array<double, 3> centroids{};
  std::array<int, 3> counts{};
  std::array<double, 2> cut_points{};
  int iterations = 0;
  double objective = 0;  // within-cluster sum of squares
};

/// K-means with K = 3. Lloyd iterations start from the values at the 1/6,
/// 3/6 and 5/6 sorted positions; an emptied cluster is reseeded at the point
/// farthest from its centroid; distance ties go to the lower cluster. The
/// fixpoint is then compared with the best contiguous split of the sorted
/// values and replaced by it when that split has a lower objective, so the
/// result is the global optimum. Throws DegenerateInput on < 3 distinct values.
ValueClustering kmeans3_values(std::span<const double> values);

struct ClusterResult {
  std::map<OperationSig, RiskLevel> assignment;
  std::array<double, 3> centroids{};
  std::array<int, 3> counts{};  // low, medium, high
  std::array<double, 2> cut_points{};
  int iterations = 0;
  double objective = 0;
};

ClusterResult kmeans3(const std::map<OperationSig, double>& means);

/// Within-cluster sum of squared deviations.
double clustering_objective(std::span<const double> values, std::span<const int> labels);

/// Rounds to two decimals for reporting.
double round2(double x);

}  // namespace tyche
