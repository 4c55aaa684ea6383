#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "leakwatch/baseline.hpp"
#include "leakwatch/config.hpp"
#include "leakwatch/cycle.hpp"
#include "leakwatch/divergence.hpp"

namespace leakwatch {

enum class VerdictCategory { leak, drift, sensor_issue };

const char* to_string(VerdictCategory category);

struct Verdict {
  StationMeta station;
  double window_start = 0.0;
  double window_end = 0.0;
  VerdictCategory category = VerdictCategory::sensor_issue;
  double probability = 0.0;
  double p1 = 0.0;
  std::optional<double> p2;
  double pressure_diff_torr = 0.0;  // median test minus median baseline, linear Torr
  double baseline_built_at = 0.0;
  DivergenceReport fs1_report;
  std::optional<DivergenceReport> fs2_report;
  std::size_t test_cycles_used = 0;
  bool scrub_skipped = false;
};

struct AlertReport {
  std::string machine_id;
  std::string station_id;
  std::string pressure_diff;   // scientific, 2-decimal mantissa
  std::string baseline_date;   // "YYYY-MM-DD HH:MM:SS"
  std::string probability;     // 4 decimals
  std::string function;
  StationType station_type = StationType::process;
  double alert_time = 0.0;

  // Companion series: the pressure history carried in the alert document and
  // the representative cycles written next to it.
  std::vector<std::pair<double, double>> timeline;  // (timestamp, Torr)
  std::vector<PressureCycle> baseline_representatives;
  std::vector<PressureCycle> test_representatives;
};

// Hourly rule-based analysis. Scrubs test outliers first (skipping the scrub
// entirely when it would drop more than the instability cap, since a real
// leak shifts most cycles), then walks the two-step feature flowchart:
// FS1 decides whether the pressure floor rose, FS2 decides whether that rise
// is a leak or a whole-profile drift.
Verdict analyze_station(const Baseline& baseline, const std::vector<PressureCycle>& test_cycles,
                        const PipelineConfig& config);

// Builds the notification payload iff the verdict is a leak at or above the
// alert threshold. Representatives are DTW medoids, up to five per side.
std::optional<AlertReport> render_alert(const Verdict& verdict, const Baseline& baseline,
                                        const std::vector<PressureCycle>& test_cycles,
                                        const PipelineConfig& config);

// Writes <data_root>/alerts/<machine>_<station>_<ISO8601>.alert.json and the
// .cycles.csv companion. Returns the JSON path.
std::filesystem::path write_alert_files(const AlertReport& report,
                                        const std::filesystem::path& data_root);

std::string format_pressure_diff(double torr);
std::string format_probability(double p);

}  // namespace leakwatch
