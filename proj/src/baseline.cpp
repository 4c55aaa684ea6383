#include "leakwatch/baseline.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "leakwatch/error.hpp"
#include "leakwatch/pca.hpp"
#include "leakwatch/telemetry_io.hpp"

namespace leakwatch {

namespace fs = std::filesystem;
using nlohmann::json;

const char* to_string(BaselineTrigger trigger) {
  return trigger == BaselineTrigger::maintenance ? "maintenance" : "design_change";
}

OutlierReport cluster_scrub(const std::vector<PressureCycle>& cycles,
                            const PipelineConfig& config) {
  const std::size_t n = cycles.size();
  if (n < config.cluster.min_pts + 2) {
    throw Error(ErrorKind::InsufficientCycles,
                "scrub needs >= " + std::to_string(config.cluster.min_pts + 2) +
                    " cycles, have " + std::to_string(n));
  }

  const DistanceMatrix matrix = pairwise_distance_matrix(cycles, config.dtw);
  const Embedding embedding =
      pca_fit_transform(matrix.values, matrix.n, matrix.n, config.variance_target);

  OutlierReport report;
  report.embedding_dims = embedding.dims;
  report.epsilon_used = estimate_epsilon(embedding.coords, embedding.n, embedding.dims,
                                         config.cluster);
  const ClusterLabels labels =
      dbscan(embedding.coords, embedding.n, embedding.dims, report.epsilon_used,
             config.cluster.min_pts);

  // Keep the largest cluster; everything else (noise and minor clusters) is
  // treated as post-maintenance transients. Ties go to the first-discovered
  // cluster.
  int keep_label = -1;
  std::size_t keep_size = 0;
  for (std::size_t c = 0; c < labels.cluster_count(); ++c) {
    if (labels.cluster_sizes[c] > keep_size) {
      keep_size = labels.cluster_sizes[c];
      keep_label = static_cast<int>(c);
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (keep_label >= 0 && labels.labels[i] == keep_label) {
      report.kept.push_back(i);
    } else {
      report.removed.push_back(i);
    }
  }
  return report;
}

OutlierReport remove_outliers(const std::vector<PressureCycle>& cycles,
                              const PipelineConfig& config) {
  OutlierReport report = cluster_scrub(cycles, config);
  const double removed_fraction =
      static_cast<double>(report.removed.size()) / static_cast<double>(cycles.size());
  if (removed_fraction > config.instability_cap) {
    std::ostringstream msg;
    msg << "would remove " << report.removed.size() << "/" << cycles.size()
        << " cycles; station likely not settled";
    throw Error(ErrorKind::BaselineUnstable, msg.str());
  }
  return report;
}

namespace {

StandardizeStats feature_stats(const std::vector<FeatureVector>& feats) {
  StandardizeStats stats;
  const auto n = static_cast<double>(feats.size());
  for (std::size_t d = 0; d < 2; ++d) {
    double sum = 0.0;
    for (const FeatureVector& fv : feats) sum += fv.f[d];
    const double mean = sum / n;
    double sq = 0.0;
    for (const FeatureVector& fv : feats) sq += (fv.f[d] - mean) * (fv.f[d] - mean);
    stats.mean[d] = mean;
    stats.std_dev[d] = std::max(std::sqrt(sq / n), 1e-12);
  }
  return stats;
}

}  // namespace

Baseline build_baseline(const std::vector<PressureCycle>& cycles, const StationMeta& meta,
                        BaselineTrigger trigger, double built_at,
                        const PipelineConfig& config) {
  if (cycles.size() < config.min_cycles_for_baseline) {
    throw Error(ErrorKind::InsufficientCycles,
                "baseline needs >= " + std::to_string(config.min_cycles_for_baseline) +
                    " cycles, have " + std::to_string(cycles.size()));
  }
  double span_start = cycles.front().start;
  double span_end = cycles.front().end;
  for (const PressureCycle& c : cycles) {
    span_start = std::min(span_start, c.start);
    span_end = std::max(span_end, c.end);
  }
  if (span_end - span_start < config.min_window_span_s) {
    throw Error(ErrorKind::InsufficientCycles,
                "cycles span " + std::to_string(span_end - span_start) +
                    " s, need >= " + std::to_string(config.min_window_span_s));
  }

  const OutlierReport scrub = remove_outliers(cycles, config);

  Baseline baseline;
  baseline.station = meta;
  baseline.built_at = built_at;
  baseline.trigger = trigger;
  baseline.outlier_count = scrub.removed.size();
  baseline.retained_cycles.reserve(scrub.kept.size());
  baseline.fs1_points.reserve(scrub.kept.size());
  baseline.fs2_points.reserve(scrub.kept.size());
  for (std::size_t idx : scrub.kept) {
    // Features come from the full-resolution cycle; only the stored copy is
    // downsampled.
    baseline.fs1_points.push_back(feature_set_1(cycles[idx], meta.station_type));
    baseline.fs2_points.push_back(feature_set_2(cycles[idx]));
    baseline.retained_cycles.push_back(downsample(cycles[idx], config.dtw.max_points));
  }
  baseline.fs1_stats = feature_stats(baseline.fs1_points);
  baseline.fs2_stats = feature_stats(baseline.fs2_points);
  return baseline;
}

namespace {

json stats_to_json(const StandardizeStats& stats) {
  return json{{"mean", stats.mean}, {"std", stats.std_dev}};
}

StandardizeStats stats_from_json(const json& j) {
  StandardizeStats stats;
  stats.mean = j.at("mean").get<std::array<double, 2>>();
  stats.std_dev = j.at("std").get<std::array<double, 2>>();
  return stats;
}

json features_to_json(const std::vector<FeatureVector>& feats) {
  json arr = json::array();
  for (const FeatureVector& fv : feats) arr.push_back(json::array({fv.f[0], fv.f[1]}));
  return arr;
}

std::vector<FeatureVector> features_from_json(const json& arr, FeatureSet set_id) {
  std::vector<FeatureVector> feats;
  feats.reserve(arr.size());
  for (const json& row : arr) {
    FeatureVector fv;
    fv.set_id = set_id;
    fv.f[0] = row.at(0).get<double>();
    fv.f[1] = row.at(1).get<double>();
    feats.push_back(fv);
  }
  return feats;
}

}  // namespace

void save_baseline(const Baseline& baseline, const fs::path& data_root) {
  json cycles = json::array();
  for (const PressureCycle& cycle : baseline.retained_cycles) {
    json points = json::array();
    for (std::size_t i = 0; i < cycle.size(); ++i) {
      points.push_back(json::array({cycle.samples[i].timestamp, cycle.log_values[i]}));
    }
    cycles.push_back(std::move(points));
  }

  const json doc{
      {"meta",
       {{"machine_id", baseline.station.machine_id},
        {"station_id", baseline.station.station_id},
        {"station_type", to_string(baseline.station.station_type)},
        {"function", baseline.station.function}}},
      {"built_at", format_utc(baseline.built_at)},
      {"trigger", to_string(baseline.trigger)},
      {"stats", {{"fs1", stats_to_json(baseline.fs1_stats)}, {"fs2", stats_to_json(baseline.fs2_stats)}}},
      {"outlier_count", baseline.outlier_count},
      {"cycles", std::move(cycles)},
      {"features",
       {{"fs1", features_to_json(baseline.fs1_points)}, {"fs2", features_to_json(baseline.fs2_points)}}},
  };

  atomic_write_file(
      baseline_path(data_root, baseline.station.machine_id, baseline.station.station_id),
      doc.dump(2) + "\n");
}

std::optional<Baseline> load_baseline(const fs::path& data_root, const std::string& machine_id,
                                      const std::string& station_id) {
  const fs::path path = baseline_path(data_root, machine_id, station_id);
  if (!fs::exists(path)) return std::nullopt;

  try {
    std::ifstream in(path);
    const json doc = json::parse(in);

    Baseline baseline;
    const json& meta = doc.at("meta");
    baseline.station.machine_id = meta.at("machine_id").get<std::string>();
    baseline.station.station_id = meta.at("station_id").get<std::string>();
    baseline.station.station_type =
        station_type_from_string(meta.at("station_type").get<std::string>());
    baseline.station.function = meta.at("function").get<std::string>();
    baseline.built_at = parse_utc(doc.at("built_at").get<std::string>());
    const std::string trigger = doc.at("trigger").get<std::string>();
    if (trigger == "maintenance") {
      baseline.trigger = BaselineTrigger::maintenance;
    } else if (trigger == "design_change") {
      baseline.trigger = BaselineTrigger::design_change;
    } else {
      throw Error(ErrorKind::CorruptBaseline, "unknown trigger '" + trigger + "'");
    }
    baseline.fs1_stats = stats_from_json(doc.at("stats").at("fs1"));
    baseline.fs2_stats = stats_from_json(doc.at("stats").at("fs2"));
    baseline.outlier_count = doc.at("outlier_count").get<std::size_t>();
    baseline.fs1_points = features_from_json(doc.at("features").at("fs1"), FeatureSet::FS1);
    baseline.fs2_points = features_from_json(doc.at("features").at("fs2"), FeatureSet::FS2);

    for (const json& points : doc.at("cycles")) {
      PressureCycle cycle;
      cycle.station = baseline.station;
      cycle.samples.reserve(points.size());
      cycle.log_values.reserve(points.size());
      for (const json& pt : points) {
        PressureSample sample;
        sample.timestamp = pt.at(0).get<double>();
        const double log_value = pt.at(1).get<double>();
        sample.pressure = std::pow(10.0, log_value);
        cycle.samples.push_back(sample);
        cycle.log_values.push_back(log_value);
      }
      if (!cycle.samples.empty()) {
        cycle.start = cycle.samples.front().timestamp;
        cycle.end = cycle.samples.back().timestamp;
      }
      baseline.retained_cycles.push_back(std::move(cycle));
    }
    return baseline;
  } catch (const std::exception& e) {
    fs::rename(path, path.string() + ".bad");
    throw Error(ErrorKind::CorruptBaseline,
                path.string() + " quarantined (" + std::string(e.what()) + ")");
  }
}

bool delete_baseline(const fs::path& data_root, const std::string& machine_id,
                     const std::string& station_id) {
  return fs::remove(baseline_path(data_root, machine_id, station_id));
}

}  // namespace leakwatch
