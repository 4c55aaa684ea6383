#include "leakwatch/features.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "leakwatch/error.hpp"

namespace leakwatch {

namespace {

void require_length(const PressureCycle& cycle, std::size_t minimum) {
  if (cycle.log_values.size() < minimum) {
    throw Error(ErrorKind::CycleTooShort,
                "cycle has " + std::to_string(cycle.log_values.size()) + " samples, needs >= " +
                    std::to_string(minimum));
  }
}

double mean(const double* begin, const double* end) {
  return std::accumulate(begin, end, 0.0) / static_cast<double>(end - begin);
}

}  // namespace

std::size_t max_jump_index(const PressureCycle& cycle) {
  require_length(cycle, 2);
  const auto& v = cycle.log_values;
  std::size_t best = 1;
  double best_jump = v[1] - v[0];
  for (std::size_t i = 2; i < v.size(); ++i) {
    const double jump = v[i] - v[i - 1];
    if (jump > best_jump) {
      best_jump = jump;
      best = i;
    }
  }
  return best;
}

FeatureVector feature_set_1(const PressureCycle& cycle, StationType station_type) {
  require_length(cycle, 2);
  const auto& v = cycle.log_values;

  FeatureVector out;
  out.set_id = FeatureSet::FS1;
  out.f[0] = *std::min_element(v.begin(), v.end());

  if (station_type == StationType::process) {
    // Mean of the flat prefix before the process jump; the jump sample itself
    // is excluded.
    const std::size_t jump = max_jump_index(cycle);
    out.f[1] = mean(v.data(), v.data() + jump);
  } else {
    const auto tail = static_cast<std::size_t>(
        std::ceil(0.2 * static_cast<double>(v.size())));
    out.f[1] = mean(v.data() + (v.size() - tail), v.data() + v.size());
  }
  return out;
}

FeatureVector feature_set_2(const PressureCycle& cycle) {
  require_length(cycle, 2);
  const auto& v = cycle.log_values;

  const auto [min_it, max_it] = std::minmax_element(v.begin(), v.end());

  std::vector<double> diffs(v.size() - 1);
  for (std::size_t i = 1; i < v.size(); ++i) diffs[i - 1] = std::abs(v[i] - v[i - 1]);
  const std::size_t mid = diffs.size() / 2;
  std::nth_element(diffs.begin(), diffs.begin() + static_cast<std::ptrdiff_t>(mid), diffs.end());
  double noisiness = diffs[mid];
  if (diffs.size() % 2 == 0) {
    const double below = *std::max_element(diffs.begin(), diffs.begin() + static_cast<std::ptrdiff_t>(mid));
    noisiness = 0.5 * (noisiness + below);
  }

  FeatureVector out;
  out.set_id = FeatureSet::FS2;
  out.f[0] = *max_it - *min_it;
  out.f[1] = noisiness;
  return out;
}

}  // namespace leakwatch
