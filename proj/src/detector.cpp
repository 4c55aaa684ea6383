#include "leakwatch/detector.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "json.hpp"
#include "leakwatch/error.hpp"
#include "leakwatch/telemetry_io.hpp"

namespace leakwatch {

namespace fs = std::filesystem;
using nlohmann::json;

const char* to_string(VerdictCategory category) {
  switch (category) {
    case VerdictCategory::leak: return "leak";
    case VerdictCategory::drift: return "drift";
    case VerdictCategory::sensor_issue: return "sensor_issue";
  }
  return "unknown";
}

namespace {

double median(std::vector<double> values) {
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid),
                   values.end());
  double result = values[mid];
  if (values.size() % 2 == 0) {
    const double below =
        *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid));
    result = 0.5 * (result + below);
  }
  return result;
}

std::vector<FeatureVector> fs1_of(const std::vector<PressureCycle>& cycles, StationType type) {
  std::vector<FeatureVector> feats;
  feats.reserve(cycles.size());
  for (const PressureCycle& c : cycles) feats.push_back(feature_set_1(c, type));
  return feats;
}

std::vector<FeatureVector> fs2_of(const std::vector<PressureCycle>& cycles) {
  std::vector<FeatureVector> feats;
  feats.reserve(cycles.size());
  for (const PressureCycle& c : cycles) feats.push_back(feature_set_2(c));
  return feats;
}

}  // namespace

Verdict analyze_station(const Baseline& baseline, const std::vector<PressureCycle>& test_cycles,
                        const PipelineConfig& config) {
  const std::size_t min_count = config.cluster.min_pts + 2;
  if (test_cycles.size() < min_count) {
    throw Error(ErrorKind::InsufficientCycles,
                "analysis needs >= " + std::to_string(min_count) + " test cycles, have " +
                    std::to_string(test_cycles.size()));
  }
  double window_start = test_cycles.front().start;
  double window_end = test_cycles.front().end;
  for (const PressureCycle& c : test_cycles) {
    window_start = std::min(window_start, c.start);
    window_end = std::max(window_end, c.end);
  }
  if (window_end - window_start < config.min_window_span_s) {
    throw Error(ErrorKind::InsufficientCycles,
                "test cycles span " + std::to_string(window_end - window_start) +
                    " s, need >= " + std::to_string(config.min_window_span_s));
  }

  // Scrub sensor glitches out of the test hour. A leak hour legitimately
  // shifts most cycles, so when the scrub would drop more than the cap (or
  // leave too few cycles for clustering) it is skipped outright.
  Verdict verdict;
  verdict.scrub_skipped = true;
  std::vector<PressureCycle> scrubbed;
  const std::vector<PressureCycle>* used = &test_cycles;
  {
    const OutlierReport report = cluster_scrub(test_cycles, config);
    const double removed_fraction =
        static_cast<double>(report.removed.size()) / static_cast<double>(test_cycles.size());
    if (removed_fraction <= config.instability_cap &&
        report.kept.size() >= config.cluster.min_pts + 1) {
      scrubbed.reserve(report.kept.size());
      for (std::size_t idx : report.kept) scrubbed.push_back(test_cycles[idx]);
      used = &scrubbed;
      verdict.scrub_skipped = false;
    }
  }

  verdict.station = baseline.station;
  verdict.window_start = window_start;
  verdict.window_end = window_end;
  verdict.baseline_built_at = baseline.built_at;
  verdict.test_cycles_used = used->size();

  const StationType type = baseline.station.station_type;
  const std::vector<FeatureVector> test_fs1 = fs1_of(*used, type);
  verdict.fs1_report = leak_probability(baseline.fs1_points, test_fs1, config.cluster);
  verdict.p1 = verdict.fs1_report.probability;

  auto run_fs2 = [&]() {
    verdict.fs2_report = leak_probability(baseline.fs2_points, fs2_of(*used), config.cluster);
    verdict.p2 = verdict.fs2_report->probability;
  };

  if (verdict.p1 >= config.tau1) {
    // Step 2: the floor rose; decide leak vs whole-profile drift.
    run_fs2();
    if (*verdict.p2 >= config.tau1) {
      verdict.category = VerdictCategory::leak;
      verdict.probability = *verdict.p2;
    } else {
      verdict.category = VerdictCategory::drift;
      verdict.probability = verdict.p1;
    }
  } else if (type == StationType::process) {
    verdict.category = VerdictCategory::sensor_issue;
    verdict.probability = verdict.p1;
  } else {
    // Non-process stations can leak through the amplitude without a clear
    // minima rise.
    run_fs2();
    if (*verdict.p2 >= config.tau1) {
      verdict.category = VerdictCategory::leak;
      verdict.probability = *verdict.p2;
    } else {
      verdict.category = VerdictCategory::sensor_issue;
      verdict.probability = std::max(verdict.p1, *verdict.p2);
    }
  }

  std::vector<double> base_mins, test_mins;
  base_mins.reserve(baseline.fs1_points.size());
  for (const FeatureVector& fv : baseline.fs1_points) base_mins.push_back(fv.f[0]);
  test_mins.reserve(test_fs1.size());
  for (const FeatureVector& fv : test_fs1) test_mins.push_back(fv.f[0]);
  verdict.pressure_diff_torr =
      std::pow(10.0, median(std::move(test_mins))) - std::pow(10.0, median(std::move(base_mins)));

  return verdict;
}

std::string format_probability(double p) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%.4f", p);
  return buf;
}

std::string format_pressure_diff(double torr) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2E", torr);
  // Compress the exponent: 1.23E-06 -> 1.23E-6.
  std::string s = buf;
  const auto e = s.find('E');
  if (e != std::string::npos && e + 2 < s.size()) {
    std::size_t digits = e + 2;
    while (digits + 1 < s.size() && s[digits] == '0') s.erase(digits, 1);
  }
  return s;
}

namespace {

// The k cycles with the smallest total DTW distance to the rest of their set.
std::vector<PressureCycle> medoid_cycles(const std::vector<PressureCycle>& cycles, std::size_t k,
                                         const DtwParams& params) {
  if (cycles.size() <= k) return cycles;
  const DistanceMatrix matrix = pairwise_distance_matrix(cycles, params);
  std::vector<std::pair<double, std::size_t>> totals(cycles.size());
  for (std::size_t i = 0; i < cycles.size(); ++i) {
    double total = 0.0;
    for (std::size_t j = 0; j < cycles.size(); ++j) total += matrix.at(i, j);
    totals[i] = {total, i};
  }
  std::sort(totals.begin(), totals.end());
  std::vector<PressureCycle> out;
  out.reserve(k);
  for (std::size_t r = 0; r < k; ++r) {
    out.push_back(downsample(cycles[totals[r].second], params.max_points));
  }
  std::sort(out.begin(), out.end(),
            [](const PressureCycle& a, const PressureCycle& b) { return a.start < b.start; });
  return out;
}

}  // namespace

std::optional<AlertReport> render_alert(const Verdict& verdict, const Baseline& baseline,
                                        const std::vector<PressureCycle>& test_cycles,
                                        const PipelineConfig& config) {
  if (verdict.category != VerdictCategory::leak || verdict.probability < config.alert_threshold) {
    return std::nullopt;
  }

  AlertReport report;
  report.machine_id = verdict.station.machine_id;
  report.station_id = verdict.station.station_id;
  report.pressure_diff = format_pressure_diff(verdict.pressure_diff_torr);
  report.baseline_date = format_utc(verdict.baseline_built_at, ' ');
  report.probability = format_probability(verdict.probability);
  report.function = verdict.station.function;
  report.station_type = verdict.station.station_type;
  report.alert_time = verdict.window_end;

  // Timeline: everything we hold for this station, baseline then test hour.
  const auto add_to_timeline = [&](const std::vector<PressureCycle>& cycles) {
    for (const PressureCycle& cycle : cycles) {
      for (const PressureSample& s : cycle.samples) {
        report.timeline.emplace_back(s.timestamp, s.pressure);
      }
    }
  };
  add_to_timeline(baseline.retained_cycles);
  add_to_timeline(test_cycles);
  std::sort(report.timeline.begin(), report.timeline.end());

  report.baseline_representatives = medoid_cycles(baseline.retained_cycles, 5, config.dtw);
  report.test_representatives = medoid_cycles(test_cycles, 5, config.dtw);
  return report;
}

std::filesystem::path write_alert_files(const AlertReport& report, const fs::path& data_root) {
  json timeline = json::array();
  for (const auto& [ts, pressure] : report.timeline) {
    timeline.push_back(json::array({ts, pressure}));
  }
  const json doc{
      {"machine", report.machine_id},
      {"station", report.station_id},
      {"pressure_diff", report.pressure_diff},
      {"baseline_date", report.baseline_date},
      {"probability", report.probability},
      {"function", report.function},
      {"station_type", to_string(report.station_type)},
      {"alert_time", format_utc(report.alert_time, ' ')},
      {"timeline", std::move(timeline)},
  };

  const std::string stem =
      report.machine_id + "_" + report.station_id + "_" + format_utc(report.alert_time);
  const fs::path dir = data_root / "alerts";
  const fs::path json_path = dir / (stem + ".alert.json");
  atomic_write_file(json_path, doc.dump(2) + "\n");

  std::string csv = "role,cycle_index,sample_index,timestamp,pressure\n";
  char row[96];
  const auto append_cycles = [&](const char* role, const std::vector<PressureCycle>& cycles) {
    for (std::size_t c = 0; c < cycles.size(); ++c) {
      for (std::size_t i = 0; i < cycles[c].size(); ++i) {
        std::snprintf(row, sizeof(row), "%s,%zu,%zu,%.3f,%.9g\n", role, c, i,
                      cycles[c].samples[i].timestamp, cycles[c].samples[i].pressure);
        csv += row;
      }
    }
  };
  append_cycles("baseline", report.baseline_representatives);
  append_cycles("test", report.test_representatives);
  atomic_write_file(dir / (stem + ".cycles.csv"), csv);

  return json_path;
}

}  // namespace leakwatch
