#include "leakwatch/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>

#include "json.hpp"
#include "leakwatch/error.hpp"
#include "leakwatch/telemetry_io.hpp"

namespace leakwatch {

namespace fs = std::filesystem;
using nlohmann::json;

const char* to_string(FaultKind kind) {
  switch (kind) {
    case FaultKind::none: return "none";
    case FaultKind::leak: return "leak";
    case FaultKind::drift: return "drift";
    case FaultKind::spike_outliers: return "spike_outliers";
  }
  return "none";
}

FaultKind fault_kind_from_string(const std::string& s) {
  if (s == "none") return FaultKind::none;
  if (s == "leak") return FaultKind::leak;
  if (s == "drift") return FaultKind::drift;
  if (s == "spike_outliers") return FaultKind::spike_outliers;
  throw Error(ErrorKind::DataError, "unknown fault kind '" + s + "'");
}

namespace {

constexpr double kGapSeconds = 2.0;

struct CycleShape {
  double log_floor;
  double log_peak;   // process only
  double log_start;  // non-process pump-down start
};

CycleShape shape_for(const StationProfile& profile, const FaultSpec& fault, bool fault_active) {
  CycleShape shape;
  const double log_base = std::log10(profile.base_pressure);
  shape.log_floor = log_base;
  shape.log_peak = std::log10(profile.process_peak);
  shape.log_start = log_base + 1.0;  // pump-down starts at 10x base
  if (fault_active && fault.kind == FaultKind::leak) {
    shape.log_floor += fault.magnitude_log10;
    shape.log_floor = std::min(shape.log_floor, shape.log_peak);
  }
  return shape;
}

}  // namespace

PressureCycle generate_cycle(const StationProfile& profile, const FaultSpec& fault,
                             bool fault_active, double t0, std::mt19937_64& rng) {
  const auto n = static_cast<std::size_t>(
      std::llround(profile.cycle_duration_s * profile.sample_rate_hz));
  const CycleShape shape = shape_for(profile, fault, fault_active);
  const double dt = 1.0 / profile.sample_rate_hz;

  std::normal_distribution<double> noise(0.0, profile.noise_sigma_log10);
  const bool drifting = fault_active && fault.kind == FaultKind::drift;
  const bool spiking = fault_active && fault.kind == FaultKind::spike_outliers &&
                       std::bernoulli_distribution(fault.spike_probability)(rng);
  std::size_t spike_index = 0;
  if (spiking) {
    spike_index = std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
  }

  PressureCycle cycle;
  cycle.start = t0;
  cycle.end = t0 + profile.cycle_duration_s;
  cycle.samples.reserve(n);

  const auto rise = static_cast<std::size_t>(std::floor(0.3 * static_cast<double>(n)));
  const auto fall = static_cast<std::size_t>(std::floor(0.7 * static_cast<double>(n)));

  for (std::size_t i = 0; i < n; ++i) {
    double log_p;
    if (profile.station_type == StationType::process) {
      if (i < rise) {
        log_p = shape.log_floor;
      } else if (i < fall) {
        log_p = shape.log_peak;
      } else {
        // Pump-down: log-linear from the peak back to the floor, reaching it
        // on the last sample.
        const double frac = fall + 1 >= n
                                ? 1.0
                                : static_cast<double>(i - fall) / static_cast<double>(n - 1 - fall);
        log_p = shape.log_peak + frac * (shape.log_floor - shape.log_peak);
      }
    } else {
      if (shape.log_floor >= shape.log_start) {
        log_p = shape.log_floor;  // leak floor swamps the pump-down
      } else {
        const double frac = static_cast<double>(i) / static_cast<double>(n - 1);
        log_p = shape.log_start + frac * (shape.log_floor - shape.log_start);
      }
    }
    if (drifting) log_p += fault.magnitude_log10;
    if (profile.noise_sigma_log10 > 0.0) log_p += noise(rng);

    PressureSample sample;
    sample.timestamp = t0 + static_cast<double>(i) * dt;
    sample.pressure = std::pow(10.0, log_p);
    if (spiking && i == spike_index) sample.pressure *= fault.spike_multiplier;
    cycle.samples.push_back(sample);
  }
  return log_transform(std::move(cycle));
}

std::uint64_t station_stream_seed(std::uint64_t scenario_seed, std::size_t station_index) {
  // splitmix64 over the pair keeps per-station streams independent.
  std::uint64_t z = scenario_seed + 0x9e3779b97f4a7c15ULL * (station_index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

StationStream generate_station_stream(const ScenarioStation& station, double horizon_hours,
                                      double start_time, std::uint64_t stream_seed) {
  if (horizon_hours < 2.0) {
    throw Error(ErrorKind::ConfigError, "horizon must cover baseline + test (>= 2 hours)");
  }
  const StationProfile& profile = station.profile;
  std::mt19937_64 rng(stream_seed);
  std::normal_distribution<double> noise(0.0, profile.noise_sigma_log10);

  const double horizon_s = horizon_hours * 3600.0;
  const double period = profile.cycle_duration_s + kGapSeconds;
  const double dt = 1.0 / profile.sample_rate_hz;
  const double gap_log = std::log10(profile.base_pressure) + 1.0;

  StationStream stream;
  const auto total = static_cast<std::size_t>(horizon_s / dt);
  stream.samples.reserve(total);

  const auto emit_gap = [&](double from, double until, bool drift_active) {
    for (double t = from; t < until - 1e-9; t += dt) {
      double log_p = gap_log;
      if (drift_active) log_p += station.fault.magnitude_log10;
      if (profile.noise_sigma_log10 > 0.0) log_p += noise(rng);
      stream.samples.push_back({start_time + t, std::pow(10.0, log_p)});
    }
  };

  double t = 0.0;
  while (t + profile.cycle_duration_s <= horizon_s) {
    const double abs_t0 = start_time + t;
    const bool active = station.fault.kind != FaultKind::none && abs_t0 >= station.fault.onset;
    const bool drift_active = active && station.fault.kind == FaultKind::drift;

    PressureCycle cycle = generate_cycle(profile, station.fault, active, abs_t0, rng);
    stream.events.push_back({abs_t0, ValveKind::close});
    stream.events.push_back({abs_t0 + profile.cycle_duration_s, ValveKind::open});
    for (const PressureSample& s : cycle.samples) stream.samples.push_back(s);

    emit_gap(t + profile.cycle_duration_s, std::min(t + period, horizon_s), drift_active);
    t += period;
  }

  const auto hours = static_cast<std::size_t>(std::llround(horizon_hours));
  stream.hour_labels.reserve(hours);
  for (std::size_t h = 1; h <= hours; ++h) {
    const double hour_end = start_time + 3600.0 * static_cast<double>(h);
    const bool active = station.fault.kind != FaultKind::none && station.fault.onset < hour_end;
    stream.hour_labels.push_back(active ? station.fault.kind : FaultKind::none);
  }
  return stream;
}

namespace {

json profile_to_json(const StationProfile& p) {
  return json{{"station_type", to_string(p.station_type)},
              {"base_pressure", p.base_pressure},
              {"process_peak", p.process_peak},
              {"cycle_duration_s", p.cycle_duration_s},
              {"sample_rate_hz", p.sample_rate_hz},
              {"noise_sigma_log10", p.noise_sigma_log10}};
}

}  // namespace

Scenario load_scenario(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ConfigError, "cannot open scenario " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::ConfigError, "bad scenario file: " + std::string(e.what()));
  }

  Scenario scenario;
  scenario.seed = doc.value("seed", 0ULL);
  scenario.horizon_hours = doc.value("horizon_hours", 6.0);
  if (doc.contains("start_time")) {
    const json& st = doc.at("start_time");
    scenario.start_time = st.is_string() ? parse_utc(st.get<std::string>()) : st.get<double>();
  }

  for (const json& entry : doc.at("stations")) {
    ScenarioStation station;
    station.meta.machine_id = entry.at("machine_id").get<std::string>();
    station.meta.station_id = entry.at("station_id").get<std::string>();
    station.meta.station_type =
        station_type_from_string(entry.value("station_type", std::string("process")));
    station.meta.function = entry.value("function", std::string());

    station.profile.station_type = station.meta.station_type;
    if (entry.contains("profile")) {
      const json& p = entry.at("profile");
      station.profile.base_pressure = p.value("base_pressure", station.profile.base_pressure);
      station.profile.process_peak = p.value("process_peak", station.profile.process_peak);
      station.profile.cycle_duration_s =
          p.value("cycle_duration_s", station.profile.cycle_duration_s);
      station.profile.sample_rate_hz = p.value("sample_rate_hz", station.profile.sample_rate_hz);
      station.profile.noise_sigma_log10 =
          p.value("noise_sigma_log10", station.profile.noise_sigma_log10);
    }
    const double min_samples = station.profile.cycle_duration_s * station.profile.sample_rate_hz;
    if (min_samples < static_cast<double>(kMinCycleSamples)) {
      throw Error(ErrorKind::ConfigError,
                  "profile for " + station.meta.station_id + " yields cycles below " +
                      std::to_string(kMinCycleSamples) + " samples");
    }
    if (!(station.profile.base_pressure < station.profile.process_peak)) {
      throw Error(ErrorKind::ConfigError,
                  "base_pressure must be below process_peak for " + station.meta.station_id);
    }

    if (entry.contains("fault")) {
      const json& f = entry.at("fault");
      station.fault.kind = fault_kind_from_string(f.value("kind", std::string("none")));
      station.fault.onset =
          scenario.start_time + 3600.0 * f.value("onset_hour", 0.0);
      station.fault.magnitude_log10 = f.value(
          "magnitude_log10", station.fault.kind == FaultKind::drift ? 0.5 : 1.0);
      station.fault.spike_probability = f.value("spike_probability", 0.05);
      station.fault.spike_multiplier = f.value("spike_multiplier", 100.0);
      if (station.fault.onset > scenario.start_time + scenario.horizon_hours * 3600.0) {
        throw Error(ErrorKind::ConfigError,
                    "fault onset beyond horizon for " + station.meta.station_id);
      }
    }
    scenario.stations.push_back(std::move(station));
  }
  return scenario;
}

void save_scenario(const Scenario& scenario, const fs::path& path) {
  json stations = json::array();
  for (const ScenarioStation& s : scenario.stations) {
    json entry{{"machine_id", s.meta.machine_id},
               {"station_id", s.meta.station_id},
               {"station_type", to_string(s.meta.station_type)},
               {"function", s.meta.function},
               {"profile", profile_to_json(s.profile)}};
    if (s.fault.kind != FaultKind::none) {
      entry["fault"] = json{{"kind", to_string(s.fault.kind)},
                            {"onset_hour", (s.fault.onset - scenario.start_time) / 3600.0},
                            {"magnitude_log10", s.fault.magnitude_log10},
                            {"spike_probability", s.fault.spike_probability},
                            {"spike_multiplier", s.fault.spike_multiplier}};
    }
    stations.push_back(std::move(entry));
  }
  const json doc{{"seed", scenario.seed},
                 {"horizon_hours", scenario.horizon_hours},
                 {"start_time", format_utc(scenario.start_time)},
                 {"stations", std::move(stations)}};
  atomic_write_file(path, doc.dump(2) + "\n");
}

void simulate_to_dir(const Scenario& scenario, const fs::path& out_dir) {
  fs::create_directories(out_dir);

  std::string truth = "machine,station,hour_index,label\n";
  for (std::size_t idx = 0; idx < scenario.stations.size(); ++idx) {
    const ScenarioStation& station = scenario.stations[idx];
    const StationStream stream =
        generate_station_stream(station, scenario.horizon_hours, scenario.start_time,
                                station_stream_seed(scenario.seed, idx));
    write_samples_csv(
        telemetry_samples_path(out_dir, station.meta.machine_id, station.meta.station_id),
        stream.samples);
    write_events_csv(
        telemetry_events_path(out_dir, station.meta.machine_id, station.meta.station_id),
        stream.events);
    for (std::size_t h = 0; h < stream.hour_labels.size(); ++h) {
      truth += station.meta.machine_id + "," + station.meta.station_id + "," +
               std::to_string(h + 1) + "," + to_string(stream.hour_labels[h]) + "\n";
    }
  }
  atomic_write_file(out_dir / "truth.csv", truth);

  // Group stations by machine so the orchestrator can drive the scenario.
  std::map<std::string, json> machines;
  for (const ScenarioStation& s : scenario.stations) {
    json& m = machines[s.meta.machine_id];
    if (m.is_null()) {
      m = json{{"machine_id", s.meta.machine_id},
               {"status", "production"},
               {"last_maintenance_end", scenario.start_time},
               {"design_revision", "rev-A"},
               {"stations", json::array()}};
    }
    m["stations"].push_back(json{{"station_id", s.meta.station_id},
                                 {"station_type", to_string(s.meta.station_type)},
                                 {"function", s.meta.function}});
  }
  json machine_list = json::array();
  for (auto& [id, m] : machines) machine_list.push_back(std::move(m));
  atomic_write_file(out_dir / "machines.json",
                    json{{"machines", std::move(machine_list)}}.dump(2) + "\n");
}

}  // namespace leakwatch
