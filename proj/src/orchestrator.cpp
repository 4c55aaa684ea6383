#include "leakwatch/orchestrator.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <condition_variable>
#include <deque>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "leakwatch/error.hpp"
#include "leakwatch/telemetry_io.hpp"

namespace leakwatch {

namespace fs = std::filesystem;
using nlohmann::json;

const char* to_string(MachineStatusKind status) {
  switch (status) {
    case MachineStatusKind::production: return "production";
    case MachineStatusKind::maintenance: return "maintenance";
    case MachineStatusKind::shutdown: return "shutdown";
  }
  return "unknown";
}

namespace {

MachineStatusKind machine_status_from_string(const std::string& s) {
  if (s == "production") return MachineStatusKind::production;
  if (s == "maintenance") return MachineStatusKind::maintenance;
  if (s == "shutdown") return MachineStatusKind::shutdown;
  throw Error(ErrorKind::MalformedMachinesFile, "unknown machine status '" + s + "'");
}

}  // namespace

std::vector<MachineStatus> load_machines_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::MalformedMachinesFile, "cannot open " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::MalformedMachinesFile, std::string(e.what()));
  }

  std::vector<MachineStatus> machines;
  try {
    for (const json& m : doc.at("machines")) {
      MachineStatus machine;
      machine.machine_id = m.at("machine_id").get<std::string>();
      machine.status = machine_status_from_string(m.at("status").get<std::string>());
      const json& lme = m.at("last_maintenance_end");
      machine.last_maintenance_end =
          lme.is_string() ? parse_utc(lme.get<std::string>()) : lme.get<double>();
      machine.design_revision = m.value("design_revision", std::string("rev-A"));
      for (const json& s : m.at("stations")) {
        StationMeta meta;
        meta.machine_id = machine.machine_id;
        meta.station_id = s.at("station_id").get<std::string>();
        meta.station_type = station_type_from_string(s.at("station_type").get<std::string>());
        meta.function = s.value("function", std::string());
        machine.stations.push_back(std::move(meta));
      }
      machines.push_back(std::move(machine));
    }
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    throw Error(ErrorKind::MalformedMachinesFile, std::string(e.what()));
  }
  return machines;
}

RunState load_run_state(const fs::path& data_root) {
  RunState state;
  const fs::path path = data_root / "state.json";
  if (!fs::exists(path)) return state;
  std::ifstream in(path);
  json doc;
  try {
    doc = json::parse(in);
    for (const auto& [key, value] : doc.at("stations").items()) {
      StationState st;
      st.last_window_end = value.at("last_window_end").get<double>();
      st.last_maintenance_seen = value.at("last_maintenance_seen").get<double>();
      st.design_revision_seen = value.at("design_revision_seen").get<std::string>();
      state.stations.emplace(key, std::move(st));
    }
  } catch (const std::exception& e) {
    throw Error(ErrorKind::DataError, "bad state file " + path.string() + ": " + e.what());
  }
  return state;
}

void save_run_state(const RunState& state, const fs::path& data_root) {
  json stations = json::object();
  for (const auto& [key, st] : state.stations) {
    stations[key] = json{{"last_window_end", st.last_window_end},
                         {"last_maintenance_seen", st.last_maintenance_seen},
                         {"design_revision_seen", st.design_revision_seen}};
  }
  atomic_write_file(data_root / "state.json", json{{"stations", stations}}.dump(2) + "\n");
}

std::vector<Job> tick(double clock, const std::vector<MachineStatus>& machines, RunState& state,
                      const fs::path& data_root) {
  const double window_end = std::floor(clock / 3600.0) * 3600.0;
  const double window_start = window_end - 3600.0;

  std::vector<Job> jobs;
  for (const MachineStatus& machine : machines) {
    for (const StationMeta& meta : machine.stations) {
      const std::string key = machine.machine_id + "/" + meta.station_id;
      auto [it, inserted] = state.stations.try_emplace(key);
      StationState& st = it->second;
      if (inserted) {
        st.last_maintenance_seen = machine.last_maintenance_end;
        st.design_revision_seen = machine.design_revision;
      }

      // Maintenance or design change since the last tick invalidates the
      // stored baseline; the station sits out this hour.
      if (machine.last_maintenance_end > st.last_maintenance_seen ||
          machine.design_revision != st.design_revision_seen) {
        delete_baseline(data_root, meta.machine_id, meta.station_id);
        st.last_maintenance_seen =
            std::max(st.last_maintenance_seen, machine.last_maintenance_end);
        st.design_revision_seen = machine.design_revision;
        continue;
      }
      if (machine.status != MachineStatusKind::production) continue;
      if (window_end <= st.last_window_end) continue;  // idempotent re-tick

      Job job;
      job.station = meta;
      job.window_start = window_start;
      job.window_end = window_end;
      if (fs::exists(baseline_path(data_root, meta.machine_id, meta.station_id))) {
        job.kind = JobKind::analyze;
      } else if (window_start >= st.last_maintenance_seen + 3600.0) {
        job.kind = JobKind::build_baseline;  // 1-hour settling wait has passed
      } else {
        continue;
      }
      st.last_window_end = window_end;
      jobs.push_back(std::move(job));
    }
  }
  return jobs;
}

ResultsLog::ResultsLog(const fs::path& path) : path_(path) {
  fs::create_directories(path.parent_path());
  fd_ = ::open(path.c_str(), O_WRONLY | O_CREAT | O_APPEND, 0644);
  if (fd_ < 0) throw Error(ErrorKind::DataError, "cannot open results log " + path.string());
}

ResultsLog::~ResultsLog() {
  if (fd_ >= 0) ::close(fd_);
}

fs::path ResultsLog::default_path(const fs::path& data_root) {
  return data_root / "results.jsonl";
}

void ResultsLog::append(const JobResult& result) {
  json row{{"machine", result.job.station.machine_id},
           {"station", result.job.station.station_id},
           {"kind", result.job.kind == JobKind::analyze ? "analyze" : "build_baseline"},
           {"window_start", result.job.window_start},
           {"window_end", result.job.window_end},
           {"status", result.status}};
  if (result.status == "ok" && result.job.kind == JobKind::analyze && result.verdict) {
    row["category"] = to_string(result.verdict->category);
    row["probability"] = result.verdict->probability;
    row["p1"] = result.verdict->p1;
    if (result.verdict->p2) row["p2"] = *result.verdict->p2;
    row["alerted"] = result.alerted;
  } else if (result.status == "ok") {
    row["cycles_kept"] = result.cycles_kept;
    row["outliers_removed"] = result.outliers_removed;
  } else {
    row["error"] = result.error;
  }

  const std::string line = row.dump() + "\n";
  // One write per line keeps records atomic under abrupt termination.
  ssize_t written = ::write(fd_, line.data(), line.size());
  if (written != static_cast<ssize_t>(line.size())) {
    throw Error(ErrorKind::DataError, "short write to results log");
  }
}

std::vector<JobResult> run_jobs(const std::vector<Job>& jobs, std::size_t pool_size,
                                const std::function<JobResult(const Job&)>& execute,
                                ResultsLog* log) {
  if (pool_size < 1) throw Error(ErrorKind::ConfigError, "pool size must be >= 1");

  // Per-station FIFO queues; a station key is in the ready deque iff it has
  // pending jobs and none in flight.
  std::map<std::string, std::deque<const Job*>> station_queues;
  std::deque<std::string> ready;
  for (const Job& job : jobs) {
    auto [it, inserted] = station_queues.try_emplace(job.station_key());
    if (inserted) ready.push_back(job.station_key());
    it->second.push_back(&job);
  }

  std::vector<JobResult> results;
  std::mutex mu;
  std::condition_variable cv;
  std::size_t active = 0;
  bool done = false;

  auto worker = [&]() {
    std::unique_lock lock(mu);
    for (;;) {
      cv.wait(lock, [&] { return done || !ready.empty(); });
      if (ready.empty()) return;
      const std::string key = std::move(ready.front());
      ready.pop_front();
      auto& queue = station_queues.at(key);
      const Job* job = queue.front();
      queue.pop_front();
      ++active;
      lock.unlock();

      JobResult result;
      try {
        result = execute(*job);
      } catch (const std::exception& e) {
        result.job = *job;
        result.status = "error";
        result.error = e.what();
      }

      lock.lock();
      if (log) log->append(result);
      results.push_back(std::move(result));
      --active;
      if (!queue.empty()) {
        ready.push_back(key);
        cv.notify_one();
      }
      if (ready.empty() && active == 0) {
        done = true;
        cv.notify_all();
      }
    }
  };

  if (jobs.empty()) return results;
  const std::size_t threads = std::min(pool_size, jobs.size());
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (std::size_t i = 0; i < threads; ++i) pool.emplace_back(worker);
  for (std::thread& t : pool) t.join();
  return results;
}

JobResult execute_job(const Job& job, const fs::path& data_root, const PipelineConfig& config) {
  JobResult result;
  result.job = job;
  try {
    const auto samples = read_samples_csv(
        telemetry_samples_path(data_root, job.station.machine_id, job.station.station_id));
    const auto events = read_events_csv(
        telemetry_events_path(data_root, job.station.machine_id, job.station.station_id));

    // Small margin so the coverage check sees samples at/after the last open.
    const double margin = 30.0;
    std::vector<PressureSample> window_samples;
    for (const PressureSample& s : samples) {
      if (s.timestamp >= job.window_start - margin && s.timestamp <= job.window_end + margin) {
        window_samples.push_back(s);
      }
    }
    std::vector<SlotValveEvent> window_events;
    for (const SlotValveEvent& ev : events) {
      if (ev.timestamp >= job.window_start - margin && ev.timestamp <= job.window_end + margin) {
        window_events.push_back(ev);
      }
    }

    SegmentationResult segmented =
        segment_cycles(window_samples, window_events, job.station, config.min_cycle_samples);
    std::vector<PressureCycle> cycles;
    for (PressureCycle& c : segmented.cycles) {
      if (c.start >= job.window_start && c.end <= job.window_end) cycles.push_back(std::move(c));
    }

    if (job.kind == JobKind::build_baseline) {
      const Baseline baseline = build_baseline(cycles, job.station, BaselineTrigger::maintenance,
                                               job.window_end, config);
      save_baseline(baseline, data_root);
      result.status = "ok";
      result.cycles_kept = baseline.retained_cycles.size();
      result.outliers_removed = baseline.outlier_count;
    } else {
      const auto baseline =
          load_baseline(data_root, job.station.machine_id, job.station.station_id);
      if (!baseline) {
        throw Error(ErrorKind::NoBaseline,
                    "no baseline for " + job.station_key() + "; cannot analyze");
      }
      Verdict verdict = analyze_station(*baseline, cycles, config);
      if (const auto alert = render_alert(verdict, *baseline, cycles, config)) {
        write_alert_files(*alert, data_root);
        result.alerted = true;
      }
      result.status = "ok";
      result.verdict = std::move(verdict);
    }
  } catch (const std::exception& e) {
    result.status = "error";
    result.error = e.what();
  }
  return result;
}

Summary summarize(const fs::path& results_log_path, double window_days,
                  std::optional<double> now, double alert_threshold) {
  Summary summary;
  summary.window_days = window_days;

  struct Row {
    double window_end;
    std::string machine;
    std::string station;
    bool counts;
  };
  std::vector<Row> rows;

  std::ifstream in(results_log_path);
  std::string line;
  double max_end = 0.0;
  while (in && std::getline(in, line)) {
    if (line.empty()) continue;
    json row;
    try {
      row = json::parse(line);
    } catch (const json::exception&) {
      continue;  // a torn trailing line from a crash is not fatal to reporting
    }
    Row r;
    r.window_end = row.value("window_end", 0.0);
    r.machine = row.value("machine", std::string());
    r.station = row.value("station", std::string());
    r.counts = row.value("status", std::string()) == "ok" &&
               row.value("category", std::string()) == "leak" &&
               row.value("probability", 0.0) >= alert_threshold;
    max_end = std::max(max_end, r.window_end);
    rows.push_back(std::move(r));
  }

  summary.now = now.value_or(max_end);
  const double cutoff = summary.now - window_days * 86400.0;

  std::map<std::pair<std::string, std::string>, std::size_t> counts;
  for (const Row& r : rows) {
    if (!r.counts || r.window_end <= cutoff || r.window_end > summary.now) continue;
    ++counts[{r.machine, r.station}];
  }
  for (const auto& [key, count] : counts) {
    summary.rows.push_back({key.first, key.second, count});
  }
  std::sort(summary.rows.begin(), summary.rows.end(), [](const SummaryRow& a, const SummaryRow& b) {
    if (a.leak_alerts != b.leak_alerts) return a.leak_alerts > b.leak_alerts;
    if (a.machine_id != b.machine_id) return a.machine_id < b.machine_id;
    return a.station_id < b.station_id;
  });
  return summary;
}

std::string render_summary_table(const Summary& summary) {
  std::size_t machine_width = 7, station_width = 7;
  for (const SummaryRow& row : summary.rows) {
    machine_width = std::max(machine_width, row.machine_id.size());
    station_width = std::max(station_width, row.station_id.size());
  }

  std::ostringstream out;
  out << "Leak alerts in the last " << summary.window_days << " days\n";
  out << std::left << std::setw(static_cast<int>(machine_width + 2)) << "machine"
      << std::setw(static_cast<int>(station_width + 2)) << "station" << "leak_alerts\n";
  for (const SummaryRow& row : summary.rows) {
    out << std::left << std::setw(static_cast<int>(machine_width + 2)) << row.machine_id
        << std::setw(static_cast<int>(station_width + 2)) << row.station_id << row.leak_alerts
        << "\n";
  }
  return out.str();
}

std::string render_summary_csv(const Summary& summary) {
  std::string out = "machine,station,leak_alerts\n";
  for (const SummaryRow& row : summary.rows) {
    out += row.machine_id + "," + row.station_id + "," + std::to_string(row.leak_alerts) + "\n";
  }
  return out;
}

}  // namespace leakwatch
