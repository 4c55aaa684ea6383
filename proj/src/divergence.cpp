#include "leakwatch/divergence.hpp"

#include <algorithm>
#include <cmath>

#include "leakwatch/error.hpp"

namespace leakwatch {

namespace {

std::vector<double> to_rows(const std::vector<FeatureVector>& feats,
                            const StandardizeStats& stats) {
  std::vector<double> rows(feats.size() * 2);
  for (std::size_t i = 0; i < feats.size(); ++i) {
    for (std::size_t d = 0; d < 2; ++d) {
      rows[i * 2 + d] = (feats[i].f[d] - stats.mean[d]) / stats.std_dev[d];
    }
  }
  return rows;
}

}  // namespace

StandardizedPair standardize(const std::vector<FeatureVector>& baseline_feats,
                             const std::vector<FeatureVector>& test_feats,
                             std::size_t min_baseline) {
  if (baseline_feats.size() < min_baseline) {
    throw Error(ErrorKind::InsufficientBaseline,
                "need >= " + std::to_string(min_baseline) + " baseline features, have " +
                    std::to_string(baseline_feats.size()));
  }

  StandardizedPair out;
  const auto n = static_cast<double>(baseline_feats.size());
  for (std::size_t d = 0; d < 2; ++d) {
    double sum = 0.0;
    for (const FeatureVector& fv : baseline_feats) sum += fv.f[d];
    const double mean = sum / n;
    double sq = 0.0;
    for (const FeatureVector& fv : baseline_feats) {
      const double delta = fv.f[d] - mean;
      sq += delta * delta;
    }
    out.stats.mean[d] = mean;
    out.stats.std_dev[d] = std::max(std::sqrt(sq / n), 1e-12);
  }
  out.baseline = to_rows(baseline_feats, out.stats);
  out.test = to_rows(test_feats, out.stats);
  return out;
}

double binary_entropy(double p) {
  if (p <= 0.0 || p >= 1.0) return 0.0;
  return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

DivergenceReport leak_probability(const std::vector<FeatureVector>& baseline_feats,
                                  const std::vector<FeatureVector>& test_feats,
                                  const ClusterParams& params) {
  const std::size_t need = params.min_pts + 1;
  if (baseline_feats.size() < need) {
    throw Error(ErrorKind::InsufficientBaseline, "need >= " + std::to_string(need) +
                                                     " baseline features, have " +
                                                     std::to_string(baseline_feats.size()));
  }
  if (test_feats.size() < need) {
    throw Error(ErrorKind::InsufficientTest, "need >= " + std::to_string(need) +
                                                 " test features, have " +
                                                 std::to_string(test_feats.size()));
  }

  const StandardizedPair pair = standardize(baseline_feats, test_feats, need);
  const std::size_t n_base = baseline_feats.size();
  const std::size_t n_test = test_feats.size();
  const std::size_t n = n_base + n_test;

  std::vector<double> pooled;
  pooled.reserve(n * 2);
  pooled.insert(pooled.end(), pair.baseline.begin(), pair.baseline.end());
  pooled.insert(pooled.end(), pair.test.begin(), pair.test.end());

  DivergenceReport report;
  report.epsilon_used = estimate_epsilon(pooled, n, 2, params);
  const ClusterLabels labels = dbscan(pooled, n, 2, report.epsilon_used, params.min_pts);

  std::vector<std::size_t> test_counts(labels.cluster_count(), 0);
  report.noise_test_count = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const bool is_test = i >= n_base;
    const int label = labels.labels[i];
    if (label < 0) {
      if (is_test) ++report.noise_test_count;
    } else if (is_test) {
      ++test_counts[static_cast<std::size_t>(label)];
    }
  }

  // A cluster whose test fraction exceeds the pooled mixing ratio holds test
  // mass the baseline cannot explain; normalize that excess to [0,1].
  const double rho = static_cast<double>(n_test) / static_cast<double>(n);
  double separated_mass = static_cast<double>(report.noise_test_count);
  report.clusters.reserve(labels.cluster_count());
  for (std::size_t c = 0; c < labels.cluster_count(); ++c) {
    ClusterStat stat;
    stat.size = labels.cluster_sizes[c];
    stat.test_count = test_counts[c];
    stat.test_fraction =
        stat.size == 0 ? 0.0 : static_cast<double>(stat.test_count) / static_cast<double>(stat.size);
    stat.entropy = binary_entropy(stat.test_fraction);
    report.clusters.push_back(stat);

    const double score = std::clamp((stat.test_fraction - rho) / (1.0 - rho), 0.0, 1.0);
    separated_mass += static_cast<double>(stat.test_count) * score;
  }
  report.probability = std::clamp(separated_mass / static_cast<double>(n_test), 0.0, 1.0);
  return report;
}

}  // namespace leakwatch
