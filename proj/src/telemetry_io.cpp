#include "leakwatch/telemetry_io.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>

#include "leakwatch/error.hpp"

namespace leakwatch {

namespace fs = std::filesystem;

namespace {

std::ifstream open_input(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::DataError, "cannot open " + path.string());
  return in;
}

bool split2(const std::string& line, std::string& a, std::string& b) {
  const auto comma = line.find(',');
  if (comma == std::string::npos) return false;
  a = line.substr(0, comma);
  b = line.substr(comma + 1);
  if (!b.empty() && b.back() == '\r') b.pop_back();
  return true;
}

double parse_double(const std::string& s, const fs::path& path, std::size_t line_no) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorKind::DataError,
                "bad numeric field '" + s + "' in " + path.string() + " line " +
                    std::to_string(line_no));
  }
}

}  // namespace

std::vector<PressureSample> read_samples_csv(const fs::path& path) {
  std::ifstream in = open_input(path);
  std::string line;
  std::vector<PressureSample> samples;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || (line_no == 1 && line.rfind("timestamp", 0) == 0)) continue;
    std::string a, b;
    if (!split2(line, a, b)) {
      throw Error(ErrorKind::DataError, "malformed row in " + path.string() + " line " +
                                            std::to_string(line_no));
    }
    PressureSample s;
    s.timestamp = parse_double(a, path, line_no);
    s.pressure = parse_double(b, path, line_no);
    if (!(s.pressure > 0.0)) {
      throw Error(ErrorKind::NonPositivePressure,
                  "pressure must be > 0 in " + path.string() + " line " + std::to_string(line_no));
    }
    samples.push_back(s);
  }
  return samples;
}

std::vector<SlotValveEvent> read_events_csv(const fs::path& path) {
  std::ifstream in = open_input(path);
  std::string line;
  std::vector<SlotValveEvent> events;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || (line_no == 1 && line.rfind("timestamp", 0) == 0)) continue;
    std::string a, b;
    if (!split2(line, a, b)) {
      throw Error(ErrorKind::DataError, "malformed row in " + path.string() + " line " +
                                            std::to_string(line_no));
    }
    SlotValveEvent ev;
    ev.timestamp = parse_double(a, path, line_no);
    if (b == "close") {
      ev.kind = ValveKind::close;
    } else if (b == "open") {
      ev.kind = ValveKind::open;
    } else {
      throw Error(ErrorKind::DataError, "bad valve kind '" + b + "' in " + path.string() +
                                            " line " + std::to_string(line_no));
    }
    events.push_back(ev);
  }
  return events;
}

namespace {

void write_lines(const fs::path& path, const std::string& content) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::DataError, "cannot write " + path.string());
  out << content;
  if (!out) throw Error(ErrorKind::DataError, "write failed for " + path.string());
}

}  // namespace

void write_samples_csv(const fs::path& path, const std::vector<PressureSample>& samples) {
  std::string buf = "timestamp,pressure\n";
  char row[64];
  for (const PressureSample& s : samples) {
    std::snprintf(row, sizeof(row), "%.3f,%.9g\n", s.timestamp, s.pressure);
    buf += row;
  }
  write_lines(path, buf);
}

void write_events_csv(const fs::path& path, const std::vector<SlotValveEvent>& events) {
  std::string buf = "timestamp,kind\n";
  char row[64];
  for (const SlotValveEvent& ev : events) {
    std::snprintf(row, sizeof(row), "%.3f,%s\n", ev.timestamp,
                  ev.kind == ValveKind::close ? "close" : "open");
    buf += row;
  }
  write_lines(path, buf);
}

fs::path telemetry_samples_path(const fs::path& data_root, const std::string& machine_id,
                                const std::string& station_id) {
  return data_root / "telemetry" / machine_id / (station_id + ".csv");
}

fs::path telemetry_events_path(const fs::path& data_root, const std::string& machine_id,
                               const std::string& station_id) {
  return data_root / "telemetry" / machine_id / (station_id + ".events.csv");
}

fs::path baseline_path(const fs::path& data_root, const std::string& machine_id,
                       const std::string& station_id) {
  return data_root / "baselines" / machine_id / (station_id + ".baseline.json");
}

void atomic_write_file(const fs::path& path, const std::string& content) {
  fs::create_directories(path.parent_path());
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::DataError, "cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw Error(ErrorKind::DataError, "write failed for " + tmp.string());
  }
  fs::rename(tmp, path);
}

std::string format_utc(double epoch_seconds, char separator) {
  const auto t = static_cast<std::time_t>(std::llround(epoch_seconds));
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d%c%02d:%02d:%02d%s", tm.tm_year + 1900,
                tm.tm_mon + 1, tm.tm_mday, separator, tm.tm_hour, tm.tm_min, tm.tm_sec,
                separator == 'T' ? "Z" : "");
  return buf;
}

double parse_utc(const std::string& text) {
  std::tm tm{};
  int year = 0, mon = 0, day = 0, hour = 0, min = 0, sec = 0;
  char sep = 'T';
  if (std::sscanf(text.c_str(), "%d-%d-%d%c%d:%d:%d", &year, &mon, &day, &sep, &hour, &min,
                  &sec) != 7) {
    throw Error(ErrorKind::DataError, "bad timestamp '" + text + "'");
  }
  tm.tm_year = year - 1900;
  tm.tm_mon = mon - 1;
  tm.tm_mday = day;
  tm.tm_hour = hour;
  tm.tm_min = min;
  tm.tm_sec = sec;
  return static_cast<double>(timegm(&tm));
}

}  // namespace leakwatch
