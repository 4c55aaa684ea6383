#pragma once

#include <array>
#include <cstddef>

#include "leakwatch/cycle.hpp"

namespace leakwatch {

enum class FeatureSet { FS1, FS2 };

// 2-D engineered cycle descriptor.
//   FS1: (cycle minimum, flat-region mean), both in log10 Torr. Shifts with
//        the pressure floor, so it flags any rise.
//   FS2: (amplitude, noisiness) in log10 units. Invariant under uniform log
//        offsets, so it tells a real leak from a gauge drift.
struct FeatureVector {
  FeatureSet set_id = FeatureSet::FS1;
  std::array<double, 2> f{0.0, 0.0};
};

// Index i >= 1 maximizing log_values[i] - log_values[i-1]; ties break to the
// smallest index.
std::size_t max_jump_index(const PressureCycle& cycle);

FeatureVector feature_set_1(const PressureCycle& cycle, StationType station_type);
FeatureVector feature_set_2(const PressureCycle& cycle);

}  // namespace leakwatch
