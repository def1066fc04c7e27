#include "tyche/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <boost/math/distributions/chi_squared.hpp>

#include "tyche/error.hpp"

namespace tyche {

ChiSquareResult chi_square_independence(const std::array<std::vector<int>, 2>& table) {
  const std::size_t cols = table[0].size();
  if (table[1].size() != cols) throw Error(ErrorKind::LengthMismatch, "contingency rows differ in length");

  double row[2] = {0, 0};
  std::vector<double> col(cols, 0);
  for (int r = 0; r < 2; ++r)
    for (std::size_t c = 0; c < cols; ++c) {
      row[r] += table[r][c];
      col[c] += table[r][c];
    }
  const double total = row[0] + row[1];
  if (total == 0 || row[0] == 0 || row[1] == 0) return {};

  // pool adjacent columns until each pooled column has expected counts >= 5
  std::vector<std::array<double, 2>> pooled;
  std::array<double, 2> acc{0, 0};
  bool open = false;
  for (std::size_t c = 0; c < cols; ++c) {
    acc[0] += table[0][c];
    acc[1] += table[1][c];
    open = true;
    double col_total = acc[0] + acc[1];
    if (std::min(row[0], row[1]) * col_total / total >= 5) {
      pooled.push_back(acc);
      acc = {0, 0};
      open = false;
    }
  }
  if (open && (acc[0] + acc[1]) > 0) {
    if (pooled.empty()) {
      pooled.push_back(acc);
    } else {
      pooled.back()[0] += acc[0];
      pooled.back()[1] += acc[1];
    }
  }
  if (pooled.size() < 2) return {};

  double stat = 0;
  for (const auto& p : pooled) {
    double ct = p[0] + p[1];
    for (int r = 0; r < 2; ++r) {
      double expected = row[r] * ct / total;
      double d = p[r] - expected;
      stat += d * d / expected;
    }
  }
  ChiSquareResult res;
  res.statistic = stat;
  res.dof = static_cast<int>(pooled.size()) - 1;
  boost::math::chi_squared_distribution<double> dist(res.dof);
  res.p_value = boost::math::cdf(boost::math::complement(dist, stat));
  return res;
}

double pearson_r(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size())
    throw Error(ErrorKind::LengthMismatch,
                "vectors differ in length (" + std::to_string(x.size()) + " vs " + std::to_string(y.size()) + ")");
  if (x.size() < 2) throw Error(ErrorKind::LengthMismatch, "correlation needs at least two points");
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double dx = x[i] - mx, dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0 || syy == 0) throw Error(ErrorKind::ConstantVector, "correlation of a constant vector is undefined");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

double clustering_objective(std::span<const double> values, std::span<const int> labels) {
  std::array<double, 3> sum{}, n{};
  for (std::size_t i = 0; i < values.size(); ++i) {
    sum[labels[i]] += values[i];
    n[labels[i]] += 1;
  }
  double sse = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    double d = values[i] - sum[labels[i]] / n[labels[i]];
    sse += d * d;
  }
  return sse;
}

double round2(double x) { return std::round(x * 100.0) / 100.0; }

namespace {

struct Lloyd {
  std::span<const double> x;
  std::array<double, 3> centroids{};
  std::vector<int> labels;
  int iterations = 0;

  // nearest centroid, ties to the lower index
  int nearest(double v) const {
    int best = 0;
    for (int k = 1; k < 3; ++k)
      if (std::abs(v - centroids[k]) < std::abs(v - centroids[best])) best = k;
    return best;
  }

  void run() {
    constexpr int kMaxIterations = 1000;
    std::vector<int> prev;
    while (iterations < kMaxIterations) {
      ++iterations;
      labels.assign(x.size(), 0);
      for (std::size_t i = 0; i < x.size(); ++i) labels[i] = nearest(x[i]);
      reseed_empty();
      if (labels == prev) break;
      prev = labels;
      update();
    }
  }

  void reseed_empty() {
    for (int k = 0; k < 3; ++k) {
      if (std::count(labels.begin(), labels.end(), k) > 0) continue;
      std::size_t far = 0;
      double far_d = -1;
      for (std::size_t i = 0; i < x.size(); ++i) {
        // only take from clusters that keep at least one point
        if (std::count(labels.begin(), labels.end(), labels[i]) < 2) continue;
        double d = std::abs(x[i] - centroids[labels[i]]);
        if (d > far_d) {
          far_d = d;
          far = i;
        }
      }
      labels[far] = k;
      centroids[k] = x[far];
    }
  }

  void update() {
    std::array<double, 3> sum{}, n{};
    for (std::size_t i = 0; i < x.size(); ++i) {
      sum[labels[i]] += x[i];
      n[labels[i]] += 1;
    }
    for (int k = 0; k < 3; ++k)
      if (n[k] > 0) centroids[k] = sum[k] / n[k];
  }
};

/// Lowest-objective split of sorted values into three non-empty runs, cutting
/// only between distinct values. Returns the two run starts.
std::pair<std::size_t, std::size_t> best_contiguous_split(const std::vector<double>& sorted) {
  const std::size_t n = sorted.size();
  const double shift = std::accumulate(sorted.begin(), sorted.end(), 0.0) / static_cast<double>(n);
  std::vector<double> s1(n + 1, 0), s2(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) {
    double v = sorted[i] - shift;
    s1[i + 1] = s1[i] + v;
    s2[i + 1] = s2[i] + v * v;
  }
  auto cost = [&](std::size_t a, std::size_t b) {
    double m = static_cast<double>(b - a);
    double s = s1[b] - s1[a];
    return (s2[b] - s2[a]) - s * s / m;
  };
  double best = std::numeric_limits<double>::infinity();
  std::pair<std::size_t, std::size_t> cut{1, 2};
  for (std::size_t i = 1; i < n; ++i) {
    if (sorted[i] == sorted[i - 1]) continue;
    for (std::size_t j = i + 1; j < n; ++j) {
      if (sorted[j] == sorted[j - 1]) continue;
      double c = cost(0, i) + cost(i, j) + cost(j, n);
      if (c < best) {
        best = c;
        cut = {i, j};
      }
    }
  }
  return cut;
}

}  // namespace

ValueClustering kmeans3_values(std::span<const double> values) {
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  if (std::unique(sorted.begin(), sorted.end()) - sorted.begin() < 3)
    throw Error(ErrorKind::DegenerateInput, "k-means with K=3 needs at least 3 distinct values");
  sorted.assign(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();

  Lloyd lloyd{values, {sorted[n / 6], sorted[n / 2], sorted[5 * n / 6]}, {}, 0};
  lloyd.run();
  double objective = clustering_objective(values, lloyd.labels);

  auto [i, j] = best_contiguous_split(sorted);
  std::vector<int> split_labels(n);
  for (std::size_t k = 0; k < n; ++k) split_labels[k] = values[k] < sorted[i] ? 0 : (values[k] < sorted[j] ? 1 : 2);
  double split_objective = clustering_objective(values, split_labels);
  if (split_objective < objective) {
    Lloyd polish{values, {}, split_labels, lloyd.iterations};
    polish.update();
    polish.run();
    if (clustering_objective(values, polish.labels) <= split_objective) lloyd = std::move(polish);
    else lloyd.labels = split_labels, lloyd.iterations = polish.iterations;
  }

  // relabel so that cluster 0 has the lowest centroid
  lloyd.update();
  std::array<int, 3> order{0, 1, 2};
  std::sort(order.begin(), order.end(), [&](int a, int b) { return lloyd.centroids[a] < lloyd.centroids[b]; });
  std::array<int, 3> rank{};
  for (int r = 0; r < 3; ++r) rank[order[r]] = r;

  ValueClustering out;
  out.labels.resize(n);
  for (std::size_t k = 0; k < n; ++k) out.labels[k] = rank[lloyd.labels[k]];
  for (int r = 0; r < 3; ++r) out.centroids[r] = lloyd.centroids[order[r]];
  std::array<double, 3> lo{}, hi{};
  lo.fill(std::numeric_limits<double>::infinity());
  hi.fill(-std::numeric_limits<double>::infinity());
  for (std::size_t k = 0; k < n; ++k) {
    int c = out.labels[k];
    ++out.counts[c];
    lo[c] = std::min(lo[c], values[k]);
    hi[c] = std::max(hi[c], values[k]);
  }
  out.cut_points = {(hi[0] + lo[1]) / 2, (hi[1] + lo[2]) / 2};
  out.iterations = lloyd.iterations;
  out.objective = clustering_objective(values, out.labels);
  return out;
}

ClusterResult kmeans3(const std::map<OperationSig, double>& means) {
  std::vector<double> values;
  values.reserve(means.size());
  for (const auto& [_, m] : means) values.push_back(m);
  auto vc = kmeans3_values(values);

  ClusterResult out;
  std::size_t k = 0;
  for (const auto& [op, _] : means) out.assignment[op] = static_cast<RiskLevel>(vc.labels[k++]);
  out.centroids = vc.centroids;
  out.counts = vc.counts;
  out.cut_points = vc.cut_points;
  out.iterations = vc.iterations;
  out.objective = vc.objective;
  return out;
}

}  // namespace tyche
