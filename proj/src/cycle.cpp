#include "leakwatch/cycle.hpp"

#include <algorithm>
#include <cmath>

#include "leakwatch/error.hpp"

namespace leakwatch {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::EmptyInput: return "EmptyInput";
    case ErrorKind::NonMonotoneTimestamps: return "NonMonotoneTimestamps";
    case ErrorKind::NonPositivePressure: return "NonPositivePressure";
    case ErrorKind::EmptySequence: return "EmptySequence";
    case ErrorKind::InsufficientCycles: return "InsufficientCycles";
    case ErrorKind::TooFewPoints: return "TooFewPoints";
    case ErrorKind::CurveTooShort: return "CurveTooShort";
    case ErrorKind::DegenerateInput: return "DegenerateInput";
    case ErrorKind::InsufficientBaseline: return "InsufficientBaseline";
    case ErrorKind::InsufficientTest: return "InsufficientTest";
    case ErrorKind::BaselineUnstable: return "BaselineUnstable";
    case ErrorKind::CorruptBaseline: return "CorruptBaseline";
    case ErrorKind::NoBaseline: return "NoBaseline";
    case ErrorKind::CycleTooShort: return "CycleTooShort";
    case ErrorKind::MalformedMachinesFile: return "MalformedMachinesFile";
    case ErrorKind::ConfigError: return "ConfigError";
    case ErrorKind::DataError: return "DataError";
  }
  return "UnknownError";
}

const char* to_string(StationType type) {
  return type == StationType::process ? "process" : "non_process";
}

StationType station_type_from_string(const std::string& s) {
  if (s == "process") return StationType::process;
  if (s == "non_process") return StationType::non_process;
  throw Error(ErrorKind::DataError, "unknown station type '" + s + "'");
}

SegmentationResult segment_cycles(std::span<const PressureSample> samples,
                                  std::span<const SlotValveEvent> events,
                                  const StationMeta& meta,
                                  std::size_t min_cycle_samples) {
  for (std::size_t i = 1; i < samples.size(); ++i) {
    if (!(samples[i].timestamp > samples[i - 1].timestamp)) {
      throw Error(ErrorKind::NonMonotoneTimestamps, "sample timestamps not strictly increasing", i);
    }
  }
  for (std::size_t i = 1; i < events.size(); ++i) {
    if (events[i].timestamp < events[i - 1].timestamp) {
      throw Error(ErrorKind::NonMonotoneTimestamps, "event timestamps not sorted", i);
    }
  }

  SegmentationResult result;
  if (events.empty() || samples.empty()) return result;

  const double first_ts = samples.front().timestamp;
  const double last_ts = samples.back().timestamp;

  bool have_close = false;
  double close_ts = 0.0;
  for (const SlotValveEvent& ev : events) {
    if (ev.kind == ValveKind::close) {
      // Repeated close without an open keeps the first close.
      if (!have_close) {
        have_close = true;
        close_ts = ev.timestamp;
      }
      continue;
    }
    if (!have_close) continue;  // open with no pending close
    have_close = false;
    const double open_ts = ev.timestamp;
    if (!(open_ts > close_ts)) continue;

    // The samples must bracket the whole interval, otherwise the cycle is a
    // stream-boundary partial.
    if (first_ts > close_ts || last_ts < open_ts) {
      ++result.partial_discarded;
      continue;
    }

    auto lo = std::lower_bound(samples.begin(), samples.end(), close_ts,
                               [](const PressureSample& s, double t) { return s.timestamp < t; });
    auto hi = std::lower_bound(lo, samples.end(), open_ts,
                               [](const PressureSample& s, double t) { return s.timestamp < t; });
    const auto count = static_cast<std::size_t>(hi - lo);
    if (count < min_cycle_samples) {
      ++result.short_discarded;
      continue;
    }

    PressureCycle cycle;
    cycle.station = meta;
    cycle.start = close_ts;
    cycle.end = open_ts;
    cycle.samples.assign(lo, hi);
    result.cycles.push_back(log_transform(std::move(cycle)));
  }
  return result;
}

PressureCycle log_transform(PressureCycle cycle) {
  cycle.log_values.resize(cycle.samples.size());
  for (std::size_t i = 0; i < cycle.samples.size(); ++i) {
    const double p = cycle.samples[i].pressure;
    if (!(p > 0.0)) {
      throw Error(ErrorKind::NonPositivePressure, "pressure must be > 0", i);
    }
    cycle.log_values[i] = std::log10(p);
  }
  return cycle;
}

}  // namespace leakwatch
