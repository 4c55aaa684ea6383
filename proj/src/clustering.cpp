#include "leakwatch/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "leakwatch/error.hpp"

namespace leakwatch {

namespace {

double sq_dist(const std::vector<double>& pts, std::size_t d, std::size_t i, std::size_t j) {
  double acc = 0.0;
  const double* a = &pts[i * d];
  const double* b = &pts[j * d];
  for (std::size_t k = 0; k < d; ++k) {
    const double diff = a[k] - b[k];
    acc += diff * diff;
  }
  return acc;
}

// Linear-interpolation quantile on a sorted vector, q in [0,1].
double quantile_sorted(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) return 0.0;
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = static_cast<std::size_t>(std::ceil(pos));
  if (lo == hi) return sorted[lo];
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
}

}  // namespace

std::vector<double> knn_distance_curve(const std::vector<double>& points, std::size_t n,
                                       std::size_t d, std::size_t k) {
  if (k < 1) throw Error(ErrorKind::ConfigError, "k must be >= 1");
  if (n <= k) throw Error(ErrorKind::TooFewPoints, "need more points than k");

  std::vector<double> curve(n);
  std::vector<double> dists;
  dists.reserve(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    dists.clear();
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      dists.push_back(sq_dist(points, d, i, j));
    }
    std::nth_element(dists.begin(), dists.begin() + static_cast<std::ptrdiff_t>(k - 1),
                     dists.end());
    curve[i] = std::sqrt(dists[k - 1]);
  }
  std::sort(curve.begin(), curve.end());
  return curve;
}

std::optional<std::size_t> kneedle_knee(const std::vector<double>& curve, double sensitivity) {
  const std::size_t n = curve.size();
  if (n < 3) throw Error(ErrorKind::CurveTooShort, "kneedle needs >= 3 points");

  const double y_min = *std::min_element(curve.begin(), curve.end());
  const double y_max = *std::max_element(curve.begin(), curve.end());
  if (!(y_max > y_min)) return std::nullopt;  // constant curve

  // Normalized difference between the uniform x grid and the curve. For a
  // rising k-distance curve the elbow is where this difference peaks.
  std::vector<double> diff(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x_n = static_cast<double>(i) / static_cast<double>(n - 1);
    const double y_n = (curve[i] - y_min) / (y_max - y_min);
    diff[i] = x_n - y_n;
  }

  double global_max = -std::numeric_limits<double>::infinity();
  for (double v : diff) global_max = std::max(global_max, v);

  const double mean_dx = 1.0 / static_cast<double>(n - 1);
  const double threshold = global_max - sensitivity * mean_dx;

  for (std::size_t i = 1; i + 1 < n; ++i) {
    const bool local_max = diff[i] > diff[i - 1] && diff[i] >= diff[i + 1];
    if (local_max && diff[i] > threshold) return i;
  }
  return std::nullopt;
}

double estimate_epsilon(const std::vector<double>& points, std::size_t n, std::size_t d,
                        const ClusterParams& params) {
  if (params.min_pts < 2) throw Error(ErrorKind::ConfigError, "min_pts must be >= 2");
  const std::vector<double> curve = knn_distance_curve(points, n, d, params.min_pts);

  // The knee marks sharp outlier elbows; on homogeneous data it tends to land
  // on the curve's shoulder and would starve the dense bulk, so the fallback
  // quantile acts as a floor rather than only as the no-knee branch.
  double eps = 0.0;
  if (curve.size() >= 3) {
    if (const auto knee = kneedle_knee(curve, params.kneedle_sensitivity)) {
      eps = curve[*knee];
    }
  }
  eps = std::max(eps, quantile_sorted(curve, params.eps_fallback_quantile));
  if (eps <= 0.0) {
    // Duplicate-heavy data: smallest positive distance, then a hard floor.
    for (double v : curve) {
      if (v > 0.0) {
        eps = v;
        break;
      }
    }
  }
  if (eps <= 0.0) eps = 1e-12;
  return eps;
}

ClusterLabels dbscan(const std::vector<double>& points, std::size_t n, std::size_t d, double eps,
                     std::size_t min_pts) {
  if (!(eps > 0.0)) throw Error(ErrorKind::ConfigError, "eps must be > 0");
  if (min_pts < 2) throw Error(ErrorKind::ConfigError, "min_pts must be >= 2");
  if (n == 0) throw Error(ErrorKind::TooFewPoints, "dbscan needs >= 1 point");

  constexpr int kUnvisited = -2;
  constexpr int kNoise = -1;
  const double eps_sq = eps * eps;

  auto neighbors_of = [&](std::size_t p, std::vector<std::size_t>& out) {
    out.clear();
    for (std::size_t q = 0; q < n; ++q) {
      if (sq_dist(points, d, p, q) <= eps_sq) out.push_back(q);  // includes p itself
    }
  };

  ClusterLabels result;
  result.labels.assign(n, kUnvisited);
  std::vector<std::size_t> neigh, seeds;

  int next_cluster = 0;
  for (std::size_t p = 0; p < n; ++p) {
    if (result.labels[p] != kUnvisited) continue;
    neighbors_of(p, neigh);
    if (neigh.size() < min_pts) {
      result.labels[p] = kNoise;
      continue;
    }
    const int cluster = next_cluster++;
    result.labels[p] = cluster;
    seeds.assign(neigh.begin(), neigh.end());
    for (std::size_t idx = 0; idx < seeds.size(); ++idx) {
      const std::size_t q = seeds[idx];
      if (result.labels[q] == kNoise) result.labels[q] = cluster;  // border point
      if (result.labels[q] != kUnvisited) continue;
      result.labels[q] = cluster;
      neighbors_of(q, neigh);
      if (neigh.size() >= min_pts) {
        seeds.insert(seeds.end(), neigh.begin(), neigh.end());
      }
    }
  }

  result.cluster_sizes.assign(static_cast<std::size_t>(next_cluster), 0);
  for (int label : result.labels) {
    if (label >= 0) ++result.cluster_sizes[static_cast<std::size_t>(label)];
  }
  return result;
}

}  // namespace leakwatch
