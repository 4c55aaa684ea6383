#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "leakwatch/clustering.hpp"
#include "leakwatch/features.hpp"

namespace leakwatch {

// Per-dimension z-score statistics, computed on the baseline only so a test
// shift cannot dilute its own scores.
struct StandardizeStats {
  std::array<double, 2> mean{0.0, 0.0};
  std::array<double, 2> std_dev{1.0, 1.0};
};

struct StandardizedPair {
  std::vector<double> baseline;  // row-major n x 2
  std::vector<double> test;
  StandardizeStats stats;
};

struct ClusterStat {
  std::size_t size = 0;
  std::size_t test_count = 0;
  double test_fraction = 0.0;  // p_c
  double entropy = 0.0;        // H2(p_c)
};

struct DivergenceReport {
  double probability = 0.0;  // in [0,1]
  std::vector<ClusterStat> clusters;
  std::size_t noise_test_count = 0;
  double epsilon_used = 0.0;
};

StandardizedPair standardize(const std::vector<FeatureVector>& baseline_feats,
                             const std::vector<FeatureVector>& test_feats,
                             std::size_t min_baseline = 6);

// H2(p) with the 0*log0 = 0 convention.
double binary_entropy(double p);

// Pools standardized baseline and test features, clusters them with DBSCAN
// at an automatically estimated epsilon, and scores how much test mass sits
// apart from the baseline: clusters contribute their test count times a
// clamped separation score (p_c relative to the pooled test fraction), and
// every noise test point counts as fully separated.
DivergenceReport leak_probability(const std::vector<FeatureVector>& baseline_feats,
                                  const std::vector<FeatureVector>& test_feats,
                                  const ClusterParams& params = {});

}  // namespace leakwatch
