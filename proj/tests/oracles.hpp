// Independent reference implementations used to freeze expected test values.
// Everything here is deliberately written from the definitions (exhaustive
// enumeration, union-find, direct formula evaluation) rather than sharing any
// code path with the library.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <vector>

namespace oracle {

// DTW by full-table dynamic programming, no band.
inline double dtw_full(const std::vector<double>& a, const std::vector<double>& b) {
  const std::size_t n = a.size(), m = b.size();
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<std::vector<double>> dp(n, std::vector<double>(m, kInf));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const double c = std::abs(a[i] - b[j]);
      if (i == 0 && j == 0) {
        dp[i][j] = c;
      } else {
        double best = kInf;
        if (i > 0) best = std::min(best, dp[i - 1][j]);
        if (j > 0) best = std::min(best, dp[i][j - 1]);
        if (i > 0 && j > 0) best = std::min(best, dp[i - 1][j - 1]);
        dp[i][j] = c + best;
      }
    }
  }
  return dp[n - 1][m - 1];
}

// DTW by exhaustive enumeration of every monotone alignment path. Exponential;
// keep inputs tiny.
inline double dtw_enumerate(const std::vector<double>& a, const std::vector<double>& b,
                            std::size_t i = 0, std::size_t j = 0) {
  const double c = std::abs(a[i] - b[j]);
  if (i + 1 == a.size() && j + 1 == b.size()) return c;
  double best = std::numeric_limits<double>::infinity();
  if (i + 1 < a.size()) best = std::min(best, dtw_enumerate(a, b, i + 1, j));
  if (j + 1 < b.size()) best = std::min(best, dtw_enumerate(a, b, i, j + 1));
  if (i + 1 < a.size() && j + 1 < b.size()) best = std::min(best, dtw_enumerate(a, b, i + 1, j + 1));
  return c + best;
}

// DBSCAN from the definition: core points by neighborhood cardinality,
// clusters as union-find components of eps-close core pairs, borders assigned
// to the lowest-ranked component holding a core within eps. Ranks follow each
// component's minimum core index, matching first-discovery numbering.
struct DbscanRef {
  std::vector<int> labels;  // -1 noise
  std::size_t cluster_count = 0;
};

inline DbscanRef dbscan_reference(const std::vector<double>& pts, std::size_t n, std::size_t d,
                                  double eps, std::size_t min_pts) {
  auto dist_sq = [&](std::size_t i, std::size_t j) {
    double acc = 0.0;
    for (std::size_t k = 0; k < d; ++k) {
      const double diff = pts[i * d + k] - pts[j * d + k];
      acc += diff * diff;
    }
    return acc;
  };
  const double eps_sq = eps * eps;

  std::vector<bool> core(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t count = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (dist_sq(i, j) <= eps_sq) ++count;
    }
    core[i] = count >= min_pts;
  }

  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t i = 0; i < n; ++i) {
    if (!core[i]) continue;
    for (std::size_t j = i + 1; j < n; ++j) {
      if (core[j] && dist_sq(i, j) <= eps_sq) parent[find(i)] = find(j);
    }
  }

  // Rank components by their smallest core index.
  std::vector<std::size_t> min_core(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    if (core[i]) {
      const std::size_t root = find(i);
      min_core[root] = std::min(min_core[root], i);
    }
  }
  std::vector<std::size_t> roots;
  for (std::size_t i = 0; i < n; ++i) {
    if (core[i] && find(i) == i) roots.push_back(i);
  }
  std::sort(roots.begin(), roots.end(),
            [&](std::size_t a, std::size_t b) { return min_core[a] < min_core[b]; });
  std::vector<int> root_label(n, -1);
  for (std::size_t r = 0; r < roots.size(); ++r) root_label[roots[r]] = static_cast<int>(r);

  DbscanRef result;
  result.cluster_count = roots.size();
  result.labels.assign(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    if (core[i]) {
      result.labels[i] = root_label[find(i)];
      continue;
    }
    int best = -1;
    for (std::size_t j = 0; j < n; ++j) {
      if (!core[j] || dist_sq(i, j) > eps_sq) continue;
      const int label = root_label[find(j)];
      if (best < 0 || label < best) best = label;
    }
    result.labels[i] = best;
  }
  return result;
}

// Kneedle on an ascending curve, evaluated directly from its definition.
inline std::optional<std::size_t> kneedle_reference(const std::vector<double>& y,
                                                    double sensitivity) {
  const std::size_t n = y.size();
  double lo = y[0], hi = y[0];
  for (double v : y) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (hi == lo) return std::nullopt;

  std::vector<double> d(n);
  for (std::size_t i = 0; i < n; ++i) {
    d[i] = static_cast<double>(i) / static_cast<double>(n - 1) - (y[i] - lo) / (hi - lo);
  }
  const double dmax = *std::max_element(d.begin(), d.end());
  const double threshold = dmax - sensitivity / static_cast<double>(n - 1);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (d[i] > d[i - 1] && d[i] >= d[i + 1] && d[i] > threshold) return i;
  }
  return std::nullopt;
}

inline double quantile_reference(std::vector<double> values, double q) {
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = static_cast<std::size_t>(std::ceil(pos));
  if (lo == hi) return values[lo];
  return values[lo] + (values[hi] - values[lo]) * (pos - static_cast<double>(lo));
}

}  // namespace oracle
