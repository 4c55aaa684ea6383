#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace leakwatch {

enum class StationType { process, non_process };

const char* to_string(StationType type);
StationType station_type_from_string(const std::string& s);

struct StationMeta {
  std::string machine_id;
  std::string station_id;
  StationType station_type = StationType::process;
  std::string function;  // free text, e.g. sputter-source name
};

struct PressureSample {
  double timestamp = 0.0;  // seconds
  double pressure = 0.0;   // Torr, > 0
};

enum class ValveKind { close, open };

struct SlotValveEvent {
  double timestamp = 0.0;
  ValveKind kind = ValveKind::close;
};

// One valve-close -> valve-open pressure trace for one disk in one station.
// Samples lie in the half-open interval [start, end); log_values mirrors
// samples with log10(pressure).
struct PressureCycle {
  StationMeta station;
  double start = 0.0;
  double end = 0.0;
  std::vector<PressureSample> samples;
  std::vector<double> log_values;

  std::size_t size() const { return samples.size(); }
};

inline constexpr std::size_t kMinCycleSamples = 10;

struct SegmentationResult {
  std::vector<PressureCycle> cycles;
  std::size_t short_discarded = 0;    // cycles below the sample minimum
  std::size_t partial_discarded = 0;  // cycles not fully covered by samples
};

// Splits a telemetry stream into cycles, one per (close, next open) event
// pair. Cycles not fully covered by samples and cycles shorter than
// min_cycle_samples are discarded (and counted). No valve events is not an
// error: the result is simply empty.
SegmentationResult segment_cycles(std::span<const PressureSample> samples,
                                  std::span<const SlotValveEvent> events,
                                  const StationMeta& meta,
                                  std::size_t min_cycle_samples = kMinCycleSamples);

// Fills log_values from samples. Idempotent; throws NonPositivePressure if
// any pressure <= 0.
PressureCycle log_transform(PressureCycle cycle);

}  // namespace leakwatch
