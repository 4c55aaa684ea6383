#pragma once

#include <cstddef>
#include <optional>
#include <vector>

namespace leakwatch {

struct ClusterParams {
  std::size_t min_pts = 5;
  double kneedle_sensitivity = 1.0;
  double eps_fallback_quantile = 0.90;
};

struct ClusterLabels {
  // -1 for noise, 0..C-1 for clusters.
  std::vector<int> labels;
  std::vector<std::size_t> cluster_sizes;

  std::size_t cluster_count() const { return cluster_sizes.size(); }
};

// Points are row-major n x d. For every point, the Euclidean distance to its
// k-th nearest other point, sorted ascending.
std::vector<double> knn_distance_curve(const std::vector<double>& points, std::size_t n,
                                       std::size_t d, std::size_t k);

// Knee of an ascending curve: min-max normalize, take the difference between
// the normalized x grid and the normalized curve, candidate knees at strict
// local maxima of that difference, keep the first one above the
// sensitivity-adjusted threshold of the global maximum. A straight line has
// no knee.
std::optional<std::size_t> kneedle_knee(const std::vector<double>& curve, double sensitivity = 1.0);

// k-distance value at the kneedle knee (k = min_pts), floored by the
// fallback quantile of the curve, with positive-minimum fallbacks so
// degenerate inputs still yield a usable epsilon.
double estimate_epsilon(const std::vector<double>& points, std::size_t n, std::size_t d,
                        const ClusterParams& params = {});

// Classic DBSCAN. Neighborhoods are closed balls (<= eps) counting the point
// itself; ambiguous border points go to the cluster discovered first under
// ascending-point-index scan order.
ClusterLabels dbscan(const std::vector<double>& points, std::size_t n, std::size_t d, double eps,
                     std::size_t min_pts);

}  // namespace leakwatch
