#pragma once

#include <cstddef>
#include <vector>

namespace leakwatch {

// Row-major n x dims projection onto the leading principal components.
struct Embedding {
  std::size_t n = 0;
  std::size_t dims = 0;
  std::vector<double> coords;                    // n * dims
  std::vector<double> explained_variance_ratio;  // one entry per retained dim

  double at(std::size_t i, std::size_t d) const { return coords[i * dims + d]; }
};

inline constexpr std::size_t kMaxPcaDims = 50;

// Mean-centers columns and projects onto the top principal components,
// keeping the smallest dimension count whose cumulative variance ratio
// reaches variance_target (capped at min(n-1, kMaxPcaDims)). Component signs
// are fixed by making the largest-magnitude loading positive. Zero-variance
// input maps to a single all-zero dimension with ratio 1 by convention.
Embedding pca_fit_transform(const std::vector<double>& matrix, std::size_t rows,
                            std::size_t cols, double variance_target = 0.99);

}  // namespace leakwatch
