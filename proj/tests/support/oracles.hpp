#pragma once

// Reference implementations kept deliberately naive. They share no code
// with the library beyond its data types.

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "tyche/trace.hpp"

namespace tyche::testing {

inline double sse(const std::vector<double>& v, std::size_t lo, std::size_t hi) {
  if (lo >= hi) return 0;
  long double mean = 0;
  for (std::size_t i = lo; i < hi; ++i) mean += v[i];
  mean /= static_cast<long double>(hi - lo);
  long double s = 0;
  for (std::size_t i = lo; i < hi; ++i) s += (v[i] - mean) * (v[i] - mean);
  return static_cast<double>(s);
}

/// Minimum within-cluster sum of squares over every split of the sorted
/// values into three non-empty contiguous runs. O(n^3).
inline double exhaustive_three_split(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i + 1 < v.size(); ++i)
    for (std::size_t j = i + 1; j < v.size(); ++j)
      best = std::min(best, sse(v, 0, i) + sse(v, i, j) + sse(v, j, v.size()));
  return best;
}

/// r = (n Sxy - Sx Sy) / sqrt((n Sxx - Sx^2)(n Syy - Sy^2)) in long double.
inline double pearson_direct(std::span<const double> x, std::span<const double> y) {
  long double n = static_cast<long double>(x.size()), sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    long double a = x[i], b = y[i];
    sx += a;
    sy += b;
    sxx += a * a;
    syy += b * b;
    sxy += a * b;
  }
  return static_cast<double>((n * sxy - sx * sy) / std::sqrt((n * sxx - sx * sx) * (n * syy - sy * sy)));
}

/// Device operations (executed commands, delivered subscriptions) not
/// immediately preceded by an Allow check of the same app and operation.
inline int mediation_violations(const Trace& trace) {
  const auto& ev = trace.events();
  int bad = 0;
  for (std::size_t i = 0; i < ev.size(); ++i) {
    std::string app;
    OperationSig op;
    if (const auto* c = ev[i].as<trace::CommandExecuted>()) {
      app = c->app;
      op = c->op;
    } else if (const auto* d = ev[i].as<trace::EventDelivered>(); d && d->op) {
      app = d->app;
      op = *d->op;
    } else {
      continue;
    }
    const trace::MonitorCheck* prev = i > 0 ? ev[i - 1].as<trace::MonitorCheck>() : nullptr;
    if (!prev || prev->verdict != Verdict::Allow || prev->app != app || !(prev->op == op)) ++bad;
  }
  return bad;
}

/// Rendered event bodies with monitoring lines dropped.
inline std::vector<std::string> without_monitoring(const Trace& trace) {
  std::vector<std::string> out;
  for (const auto& e : trace.events()) {
    if (e.kind() == TraceKind::MonitorCheck || e.kind() == TraceKind::StartupNotice) continue;
    out.push_back(render_body(e));
  }
  return out;
}

}  // namespace tyche::testing
