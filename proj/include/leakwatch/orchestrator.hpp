#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "leakwatch/config.hpp"
#include "leakwatch/cycle.hpp"
#include "leakwatch/detector.hpp"

namespace leakwatch {

enum class MachineStatusKind { production, maintenance, shutdown };

const char* to_string(MachineStatusKind status);

struct MachineStatus {
  std::string machine_id;
  MachineStatusKind status = MachineStatusKind::production;
  double last_maintenance_end = 0.0;
  std::string design_revision;
  std::vector<StationMeta> stations;
};

// Throws MalformedMachinesFile; a failed load must leave prior state intact.
std::vector<MachineStatus> load_machines_file(const std::filesystem::path& path);

struct StationState {
  double last_window_end = 0.0;
  double last_maintenance_seen = 0.0;
  std::string design_revision_seen;
};

struct RunState {
  std::map<std::string, StationState> stations;  // key: "machine/station"
};

RunState load_run_state(const std::filesystem::path& data_root);
void save_run_state(const RunState& state, const std::filesystem::path& data_root);

enum class JobKind { build_baseline, analyze };

struct Job {
  JobKind kind = JobKind::analyze;
  StationMeta station;
  double window_start = 0.0;
  double window_end = 0.0;

  std::string station_key() const { return station.machine_id + "/" + station.station_id; }
};

// Hourly scheduling pass. Maintenance or a design-revision change invalidates
// the stored baseline and skips the hour; otherwise production stations get a
// BuildBaseline job (no baseline yet, and the 1-hour post-maintenance wait
// has passed) or an Analyze job over the most recent full hour. Re-ticking at
// the same clock schedules nothing.
std::vector<Job> tick(double clock, const std::vector<MachineStatus>& machines, RunState& state,
                      const std::filesystem::path& data_root);

struct JobResult {
  Job job;
  std::string status;  // ok | error
  std::optional<Verdict> verdict;
  bool alerted = false;
  std::size_t cycles_kept = 0;    // baseline builds
  std::size_t outliers_removed = 0;
  std::string error;
};

// Append-only line-delimited results. Every append is a single write of a
// full line so a killed process never leaves a torn record.
class ResultsLog {
 public:
  explicit ResultsLog(const std::filesystem::path& path);
  ~ResultsLog();
  ResultsLog(const ResultsLog&) = delete;
  ResultsLog& operator=(const ResultsLog&) = delete;

  void append(const JobResult& result);
  const std::filesystem::path& path() const { return path_; }

  static std::filesystem::path default_path(const std::filesystem::path& data_root);

 private:
  std::filesystem::path path_;
  int fd_ = -1;
};

inline constexpr std::size_t kMinPoolSize = 8;
inline constexpr std::size_t kMaxPoolSize = 32;

// Executes jobs on a bounded worker pool. Jobs sharing a station key never
// run concurrently with each other; one job's failure is recorded as an
// error result and never aborts the batch. Results land in the log (when
// given) in completion order.
std::vector<JobResult> run_jobs(const std::vector<Job>& jobs, std::size_t pool_size,
                                const std::function<JobResult(const Job&)>& execute,
                                ResultsLog* log = nullptr);

// The production job body: reads the station telemetry, segments the window,
// then builds a baseline or analyzes against the stored one (emitting alert
// files above the threshold). Failures come back as error results.
JobResult execute_job(const Job& job, const std::filesystem::path& data_root,
                      const PipelineConfig& config);

struct SummaryRow {
  std::string machine_id;
  std::string station_id;
  std::size_t leak_alerts = 0;
};

struct Summary {
  std::vector<SummaryRow> rows;  // sorted by alert count descending
  double window_days = 7.0;
  double now = 0.0;
};

// Counts alert-grade leak verdicts per station over the trailing window.
// `now` defaults to the newest window_end in the log.
Summary summarize(const std::filesystem::path& results_log_path, double window_days = 7.0,
                  std::optional<double> now = std::nullopt, double alert_threshold = 0.85);

std::string render_summary_table(const Summary& summary);
std::string render_summary_csv(const Summary& summary);

}  // namespace leakwatch
