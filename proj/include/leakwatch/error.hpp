#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace leakwatch {

enum class ErrorKind {
  EmptyInput,
  NonMonotoneTimestamps,
  NonPositivePressure,
  EmptySequence,
  InsufficientCycles,
  TooFewPoints,
  CurveTooShort,
  DegenerateInput,
  InsufficientBaseline,
  InsufficientTest,
  BaselineUnstable,
  CorruptBaseline,
  NoBaseline,
  CycleTooShort,
  MalformedMachinesFile,
  ConfigError,
  DataError,
};

const char* to_string(ErrorKind kind);

// Single exception type carrying a machine-checkable kind plus, where it
// helps diagnosis, the offending element index.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}
  Error(ErrorKind kind, const std::string& message, std::size_t index)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message + " (index " +
                           std::to_string(index) + ")"),
        kind_(kind),
        index_(index) {}

  ErrorKind kind() const { return kind_; }
  std::optional<std::size_t> index() const { return index_; }

 private:
  ErrorKind kind_;
  std::optional<std::size_t> index_;
};

}  // namespace leakwatch
