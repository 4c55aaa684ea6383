#pragma once

#include <cstddef>

#include "leakwatch/clustering.hpp"
#include "leakwatch/dtw.hpp"

namespace leakwatch {

// Shared knobs for baseline building and hourly analysis.
struct PipelineConfig {
  DtwParams dtw;
  ClusterParams cluster;

  std::size_t min_cycle_samples = 10;
  std::size_t min_cycles_for_baseline = 30;
  double min_window_span_s = 2700.0;  // 45 minutes of coverage
  double instability_cap = 0.30;      // max outlier fraction before a baseline is distrusted
  double variance_target = 0.99;

  double tau1 = 0.5;             // step-1 high/low probability branch
  double alert_threshold = 0.85;
};

}  // namespace leakwatch
