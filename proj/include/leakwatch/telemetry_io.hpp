#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "leakwatch/cycle.hpp"

namespace leakwatch {

// Telemetry file formats (UTF-8, LF):
//   samples: header "timestamp,pressure"  (seconds, Torr)
//   events:  header "timestamp,kind"      (kind in {close,open})
std::vector<PressureSample> read_samples_csv(const std::filesystem::path& path);
std::vector<SlotValveEvent> read_events_csv(const std::filesystem::path& path);

void write_samples_csv(const std::filesystem::path& path,
                       const std::vector<PressureSample>& samples);
void write_events_csv(const std::filesystem::path& path,
                      const std::vector<SlotValveEvent>& events);

// Data-root layout helpers shared by the simulator, the CLI and the
// orchestrator.
std::filesystem::path telemetry_samples_path(const std::filesystem::path& data_root,
                                             const std::string& machine_id,
                                             const std::string& station_id);
std::filesystem::path telemetry_events_path(const std::filesystem::path& data_root,
                                            const std::string& machine_id,
                                            const std::string& station_id);
std::filesystem::path baseline_path(const std::filesystem::path& data_root,
                                    const std::string& machine_id,
                                    const std::string& station_id);

// Atomically replaces `path` with `content` (temp file + rename).
void atomic_write_file(const std::filesystem::path& path, const std::string& content);

// ISO-8601 UTC. `separator` is 'T' for file formats, ' ' for report rendering.
std::string format_utc(double epoch_seconds, char separator = 'T');
double parse_utc(const std::string& text);

}  // namespace leakwatch
