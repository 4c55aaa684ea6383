#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "leakwatch/config.hpp"
#include "leakwatch/cycle.hpp"
#include "leakwatch/divergence.hpp"
#include "leakwatch/features.hpp"

namespace leakwatch {

enum class BaselineTrigger { maintenance, design_change };

const char* to_string(BaselineTrigger trigger);

// Scrubbed set of good post-maintenance cycles plus the feature statistics
// needed to compare later hours against them.
struct Baseline {
  StationMeta station;
  double built_at = 0.0;
  BaselineTrigger trigger = BaselineTrigger::maintenance;
  std::vector<PressureCycle> retained_cycles;  // stored downsampled
  std::vector<FeatureVector> fs1_points;
  std::vector<FeatureVector> fs2_points;
  StandardizeStats fs1_stats;
  StandardizeStats fs2_stats;
  std::size_t outlier_count = 0;
};

struct OutlierReport {
  std::vector<std::size_t> kept;
  std::vector<std::size_t> removed;
  double epsilon_used = 0.0;
  std::size_t embedding_dims = 0;
};

// DTW -> PCA -> DBSCAN scrub keeping the largest cluster. Never fails on the
// removal fraction; remove_outliers layers the instability check on top.
OutlierReport cluster_scrub(const std::vector<PressureCycle>& cycles,
                            const PipelineConfig& config);

// Same scrub, but refuses (BaselineUnstable) when more than
// config.instability_cap of the cycles would be dropped: the station has
// probably not settled and the caller should retry next hour.
OutlierReport remove_outliers(const std::vector<PressureCycle>& cycles,
                              const PipelineConfig& config);

// Scrubs, extracts both feature sets from the kept cycles, and fixes the
// standardization statistics. Cycles must cover at least
// config.min_window_span_s of wall time.
Baseline build_baseline(const std::vector<PressureCycle>& cycles, const StationMeta& meta,
                        BaselineTrigger trigger, double built_at, const PipelineConfig& config);

// Persistence: one JSON document per station, replaced atomically.
void save_baseline(const Baseline& baseline, const std::filesystem::path& data_root);
std::optional<Baseline> load_baseline(const std::filesystem::path& data_root,
                                      const std::string& machine_id,
                                      const std::string& station_id);
bool delete_baseline(const std::filesystem::path& data_root, const std::string& machine_id,
                     const std::string& station_id);

}  // namespace leakwatch
