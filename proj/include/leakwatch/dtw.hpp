#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "leakwatch/cycle.hpp"

namespace leakwatch {

struct DtwParams {
  // Sakoe-Chiba window as a fraction of the longer sequence; widened
  // automatically so the end cell stays reachable.
  double band_fraction = 0.1;
  // Cycles longer than this are decimated before the distance matrix.
  std::size_t max_points = 200;
};

// Symmetric pairwise distances with a zero diagonal, full row-major storage.
struct DistanceMatrix {
  std::size_t n = 0;
  std::vector<double> values;

  double at(std::size_t i, std::size_t j) const { return values[i * n + j]; }
  double& at(std::size_t i, std::size_t j) { return values[i * n + j]; }
};

// Uniform index decimation preserving the first and last samples. Identity
// when the cycle already fits.
PressureCycle downsample(const PressureCycle& cycle, std::size_t max_points);

// Accumulated (unnormalized) DTW path cost with L1 local cost and steps
// (up, right, diagonal), constrained to |i - j| <= band where band is
// ceil(band_fraction * max(len)) widened to at least the length difference.
double dtw_distance(std::span<const double> a, std::span<const double> b,
                    const DtwParams& params = {});

// Each pair computed once; cycles are downsampled to params.max_points first.
DistanceMatrix pairwise_distance_matrix(const std::vector<PressureCycle>& cycles,
                                        const DtwParams& params = {});

}  // namespace leakwatch
