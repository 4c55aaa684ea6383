#include "leakwatch/dtw.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "leakwatch/error.hpp"

namespace leakwatch {

PressureCycle downsample(const PressureCycle& cycle, std::size_t max_points) {
  if (max_points < 2) throw Error(ErrorKind::ConfigError, "max_points must be >= 2");
  const std::size_t n = cycle.size();
  if (n <= max_points) return cycle;

  PressureCycle out;
  out.station = cycle.station;
  out.start = cycle.start;
  out.end = cycle.end;
  out.samples.reserve(max_points);
  out.log_values.reserve(max_points);
  for (std::size_t k = 0; k < max_points; ++k) {
    // Rounded uniform spacing; k=0 and k=max_points-1 land on the endpoints.
    const std::size_t i = static_cast<std::size_t>(
        std::llround(static_cast<double>(k) * static_cast<double>(n - 1) /
                     static_cast<double>(max_points - 1)));
    out.samples.push_back(cycle.samples[i]);
    if (!cycle.log_values.empty()) out.log_values.push_back(cycle.log_values[i]);
  }
  return out;
}

double dtw_distance(std::span<const double> a, std::span<const double> b,
                    const DtwParams& params) {
  if (a.empty() || b.empty()) throw Error(ErrorKind::EmptySequence, "DTW needs non-empty inputs");

  const std::size_t n = a.size();
  const std::size_t m = b.size();
  const std::size_t longer = std::max(n, m);
  const std::size_t diff = n > m ? n - m : m - n;
  const std::size_t band = std::max<std::size_t>(
      static_cast<std::size_t>(std::ceil(params.band_fraction * static_cast<double>(longer))),
      diff);

  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> prev(m, kInf), curr(m, kInf);

  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j_lo = i > band ? i - band : 0;
    const std::size_t j_hi = std::min(m - 1, i + band);
    std::fill(curr.begin(), curr.end(), kInf);
    const double ai = a[i];
    for (std::size_t j = j_lo; j <= j_hi; ++j) {
      const double cost = std::abs(ai - b[j]);
      double best;
      if (i == 0 && j == 0) {
        best = 0.0;
      } else {
        best = kInf;
        if (i > 0) best = std::min(best, prev[j]);
        if (j > 0) best = std::min(best, curr[j - 1]);
        if (i > 0 && j > 0) best = std::min(best, prev[j - 1]);
      }
      curr[j] = cost + best;
    }
    std::swap(prev, curr);
  }
  return prev[m - 1];
}

DistanceMatrix pairwise_distance_matrix(const std::vector<PressureCycle>& cycles,
                                        const DtwParams& params) {
  if (cycles.size() < 2) {
    throw Error(ErrorKind::InsufficientCycles, "distance matrix needs >= 2 cycles");
  }

  std::vector<std::vector<double>> series;
  series.reserve(cycles.size());
  for (const PressureCycle& c : cycles) {
    series.push_back(downsample(c, params.max_points).log_values);
  }

  DistanceMatrix matrix;
  matrix.n = cycles.size();
  matrix.values.assign(matrix.n * matrix.n, 0.0);
  for (std::size_t i = 0; i < matrix.n; ++i) {
    for (std::size_t j = i + 1; j < matrix.n; ++j) {
      const double d = dtw_distance(series[i], series[j], params);
      matrix.at(i, j) = d;
      matrix.at(j, i) = d;
    }
  }
  return matrix;
}

}  // namespace leakwatch
