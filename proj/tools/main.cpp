#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "leakwatch/baseline.hpp"
#include "leakwatch/detector.hpp"
#include "leakwatch/error.hpp"
#include "leakwatch/orchestrator.hpp"
#include "leakwatch/simulator.hpp"
#include "leakwatch/telemetry_io.hpp"

namespace fs = std::filesystem;
using namespace leakwatch;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitData = 2;

// Accepts epoch seconds or ISO-8601.
double parse_time_arg(const std::string& s) {
  if (s.find('-') != std::string::npos && s.find(':') != std::string::npos) return parse_utc(s);
  return std::stod(s);
}

// "T1..T2" -> [start, end)
std::pair<double, double> parse_window(const std::string& s) {
  const auto sep = s.find("..");
  if (sep == std::string::npos) {
    throw Error(ErrorKind::ConfigError, "window must be T1..T2, got '" + s + "'");
  }
  const double start = parse_time_arg(s.substr(0, sep));
  const double end = parse_time_arg(s.substr(sep + 2));
  if (!(end > start)) throw Error(ErrorKind::ConfigError, "window end must be after start");
  return {start, end};
}

StationMeta find_station(const fs::path& machines_file, const std::string& machine_id,
                         const std::string& station_id) {
  for (const MachineStatus& machine : load_machines_file(machines_file)) {
    if (machine.machine_id != machine_id) continue;
    for (const StationMeta& meta : machine.stations) {
      if (meta.station_id == station_id) return meta;
    }
  }
  throw Error(ErrorKind::ConfigError,
              machine_id + "/" + station_id + " not found in " + machines_file.string());
}

int exit_code_for(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::ConfigError:
    case ErrorKind::MalformedMachinesFile: return kExitConfig;
    default: return kExitData;
  }
}

void print_verdict(const Verdict& verdict, bool alerted) {
  std::cout << verdict.station.machine_id << "/" << verdict.station.station_id << " ["
            << format_utc(verdict.window_start, ' ') << " .. "
            << format_utc(verdict.window_end, ' ') << "] " << to_string(verdict.category)
            << " probability=" << format_probability(verdict.probability)
            << " p1=" << format_probability(verdict.p1);
  if (verdict.p2) std::cout << " p2=" << format_probability(*verdict.p2);
  std::cout << " pressure_diff=" << format_pressure_diff(verdict.pressure_diff_torr)
            << (alerted ? " ALERT" : "") << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Unsupervised vacuum-leak detection for sputter stations"};
  app.require_subcommand(1);

  PipelineConfig config;

  // simulate
  auto* simulate = app.add_subcommand("simulate", "Generate synthetic telemetry from a scenario");
  std::string scenario_file;
  std::string out_dir;
  simulate->add_option("--scenario", scenario_file, "Scenario JSON file")->required();
  simulate->add_option("--out", out_dir, "Output data directory")->required();

  // build-baseline
  auto* build = app.add_subcommand("build-baseline", "Build a station baseline over a window");
  std::string data_dir, machine_id, station_id, window_arg, machines_arg, trigger_arg =
      "maintenance";
  build->add_option("--data", data_dir, "Data directory")->required();
  build->add_option("--machine", machine_id, "Machine id")->required();
  build->add_option("--station", station_id, "Station id")->required();
  build->add_option("--window", window_arg, "Window T1..T2 (epoch seconds or ISO-8601)")
      ->required();
  build->add_option("--machines", machines_arg, "Machines file (default <data>/machines.json)");
  build->add_option("--trigger", trigger_arg, "maintenance|design_change");

  // analyze
  auto* analyze = app.add_subcommand("analyze", "Analyze a station window against its baseline");
  analyze->add_option("--data", data_dir, "Data directory")->required();
  analyze->add_option("--machine", machine_id, "Machine id")->required();
  analyze->add_option("--station", station_id, "Station id")->required();
  analyze->add_option("--window", window_arg, "Window T1..T2 (epoch seconds or ISO-8601)")
      ->required();
  analyze->add_option("--machines", machines_arg, "Machines file (default <data>/machines.json)");

  // run
  auto* run = app.add_subcommand("run", "Replay hourly ticks over a data directory");
  std::string run_machines, from_arg;
  int hours = 1;
  std::size_t pool = kMinPoolSize;
  bool allow_small_pool = false;
  run->add_option("--machines", run_machines, "Machines file")->required();
  run->add_option("--data", data_dir, "Data directory")->required();
  run->add_option("--from", from_arg, "Replay start time (epoch seconds or ISO-8601)")->required();
  run->add_option("--hours", hours, "Number of hourly ticks")->required();
  run->add_option("--pool", pool, "Worker pool size (8..32)");
  run->add_flag("--allow-small-pool", allow_small_pool, "Permit pools below the contract minimum");

  // report
  auto* report = app.add_subcommand("report", "List emitted leak alerts");
  std::string alerts_dir;
  report->add_option("--alerts", alerts_dir, "Alerts directory")->required();

  // summary
  auto* summary_cmd = app.add_subcommand("summary", "Leak alerts per station over a window");
  std::string log_arg, now_arg;
  double days = 7.0;
  bool csv_out = false;
  summary_cmd->add_option("--log", log_arg, "Results log (or use --data)");
  summary_cmd->add_option("--data", data_dir, "Data directory holding results.jsonl");
  summary_cmd->add_option("--days", days, "Trailing window in days");
  summary_cmd->add_option("--now", now_arg, "Window anchor (default: newest record)");
  summary_cmd->add_flag("--csv", csv_out, "Machine-readable rows");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*simulate) {
      const Scenario scenario = load_scenario(scenario_file);
      simulate_to_dir(scenario, out_dir);
      std::cout << "simulated " << scenario.stations.size() << " stations over "
                << scenario.horizon_hours << " h into " << out_dir << "\n";
      return kExitOk;
    }

    if (*build || *analyze) {
      const auto [t1, t2] = parse_window(window_arg);
      const fs::path machines_file =
          machines_arg.empty() ? fs::path(data_dir) / "machines.json" : fs::path(machines_arg);
      Job job;
      job.kind = *build ? JobKind::build_baseline : JobKind::analyze;
      job.station = find_station(machines_file, machine_id, station_id);
      job.window_start = t1;
      job.window_end = t2;
      if (*build && trigger_arg != "maintenance" && trigger_arg != "design_change") {
        throw Error(ErrorKind::ConfigError, "trigger must be maintenance|design_change");
      }

      const JobResult result = execute_job(job, data_dir, config);
      ResultsLog log(ResultsLog::default_path(data_dir));
      log.append(result);
      if (result.status != "ok") {
        std::cerr << "error: " << result.error << "\n";
        return kExitData;
      }
      if (result.verdict) {
        print_verdict(*result.verdict, result.alerted);
      } else {
        std::cout << "baseline built: kept " << result.cycles_kept << " cycles, removed "
                  << result.outliers_removed << " outliers\n";
      }
      return kExitOk;
    }

    if (*run) {
      if (!allow_small_pool && (pool < kMinPoolSize || pool > kMaxPoolSize)) {
        std::cerr << "error: pool must be in [" << kMinPoolSize << ", " << kMaxPoolSize
                  << "] (use --allow-small-pool to override)\n";
        return kExitConfig;
      }
      if (pool < 1) {
        std::cerr << "error: pool must be >= 1\n";
        return kExitConfig;
      }
      const double from = parse_time_arg(from_arg);
      const fs::path data_root(data_dir);
      RunState state = load_run_state(data_root);
      ResultsLog log(ResultsLog::default_path(data_root));

      std::size_t total_jobs = 0, alerts = 0, errors = 0;
      for (int h = 1; h <= hours; ++h) {
        const double clock = from + 3600.0 * h;
        std::vector<MachineStatus> machines;
        try {
          machines = load_machines_file(run_machines);
        } catch (const Error& e) {
          std::cerr << "tick " << format_utc(clock, ' ') << " aborted: " << e.what() << "\n";
          continue;  // prior state intact
        }
        const std::vector<Job> jobs = tick(clock, machines, state, data_root);
        const auto results = run_jobs(
            jobs, pool, [&](const Job& job) { return execute_job(job, data_root, config); },
            &log);
        save_run_state(state, data_root);

        for (const JobResult& r : results) {
          ++total_jobs;
          if (r.alerted) ++alerts;
          if (r.status != "ok") ++errors;
        }
        std::cout << "tick " << format_utc(clock, ' ') << ": " << jobs.size() << " jobs\n";
      }
      std::cout << "done: " << total_jobs << " jobs, " << alerts << " alerts, " << errors
                << " errors\n";
      return kExitOk;
    }

    if (*report) {
      std::vector<fs::path> files;
      if (fs::exists(alerts_dir)) {
        for (const auto& entry : fs::directory_iterator(alerts_dir)) {
          if (entry.path().string().ends_with(".alert.json")) files.push_back(entry.path());
        }
      }
      std::sort(files.begin(), files.end());
      std::cout << "machine\tstation\tpressure diff\tbaseline date\tprobability\tfunction\t"
                   "station type\n";
      for (const fs::path& file : files) {
        std::ifstream in(file);
        const auto doc = nlohmann::json::parse(in);
        std::cout << doc.value("machine", "") << "\t" << doc.value("station", "") << "\t"
                  << doc.value("pressure_diff", "") << "\t" << doc.value("baseline_date", "")
                  << "\t" << doc.value("probability", "") << "\t" << doc.value("function", "")
                  << "\t" << doc.value("station_type", "") << "\n";
      }
      return kExitOk;
    }

    if (*summary_cmd) {
      fs::path log_path = log_arg.empty() ? ResultsLog::default_path(data_dir) : fs::path(log_arg);
      std::optional<double> now;
      if (!now_arg.empty()) now = parse_time_arg(now_arg);
      const Summary summary = summarize(log_path, days, now, config.alert_threshold);
      std::cout << (csv_out ? render_summary_csv(summary) : render_summary_table(summary));
      return kExitOk;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitConfig;
}
