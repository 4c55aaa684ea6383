#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "leakwatch/cycle.hpp"

namespace leakwatch {

// 2022-01-01 00:00:00 UTC; scenario clocks default here so rendered
// timestamps look like real dates.
inline constexpr double kDefaultScenarioEpoch = 1640995200.0;

struct StationProfile {
  StationType station_type = StationType::process;
  double base_pressure = 1e-7;   // Torr
  double process_peak = 1e-3;    // Torr, process stations only
  double cycle_duration_s = 20.0;
  double sample_rate_hz = 10.0;
  double noise_sigma_log10 = 0.02;  // multiplicative lognormal noise
};

enum class FaultKind { none, leak, drift, spike_outliers };

const char* to_string(FaultKind kind);
FaultKind fault_kind_from_string(const std::string& s);

struct FaultSpec {
  FaultKind kind = FaultKind::none;
  double onset = 0.0;            // absolute seconds
  double magnitude_log10 = 1.0;  // leak: floor rise; drift: uniform offset
  double spike_probability = 0.05;
  double spike_multiplier = 100.0;
};

struct ScenarioStation {
  StationMeta meta;
  StationProfile profile;
  FaultSpec fault;
};

struct Scenario {
  std::vector<ScenarioStation> stations;
  double horizon_hours = 6.0;
  std::uint64_t seed = 0;
  double start_time = kDefaultScenarioEpoch;
};

struct StationStream {
  std::vector<PressureSample> samples;
  std::vector<SlotValveEvent> events;
  std::vector<FaultKind> hour_labels;  // index 0 = hour 1
};

// One synthetic valve-close -> valve-open trace starting at t0. The process
// shape is floor / peak plateau / log-linear pump-down back to the floor;
// non-process stations pump down from 10x base pressure. An active leak
// raises the floor and the pump-down asymptote while peaks stay put; a drift
// offsets every sample; a spike multiplies one random sample.
PressureCycle generate_cycle(const StationProfile& profile, const FaultSpec& fault,
                             bool fault_active, double t0, std::mt19937_64& rng);

// Back-to-back cycles with 2 s gaps over the whole horizon, valve events
// bracketing each cycle data, plus per-hour ground-truth labels.
StationStream generate_station_stream(const ScenarioStation& station, double horizon_hours,
                                      double start_time, std::uint64_t stream_seed);

// Deterministic per-station seed derived from the scenario seed.
std::uint64_t station_stream_seed(std::uint64_t scenario_seed, std::size_t station_index);

Scenario load_scenario(const std::filesystem::path& path);
void save_scenario(const Scenario& scenario, const std::filesystem::path& path);

// Writes telemetry + events CSVs, truth.csv, and a machines.json covering
// every machine in the scenario.
void simulate_to_dir(const Scenario& scenario, const std::filesystem::path& out_dir);

}  // namespace leakwatch
