#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ars {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid or inconsistent configuration (thresholds, lexicon, trigger set, CLI flags).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A token distribution that violates its invariants (negative mass, zero total, ...).
class InvalidDistributionError : public Error {
 public:
  using Error::Error;
};

/// Every candidate was masked and no fallback was allowed.
class DegenerateDistributionError : public Error {
 public:
  using Error::Error;
};

/// Transport or protocol failure talking to a generation backend.
class BackendError : public Error {
 public:
  BackendError(const std::string& what, int attempts = 1, int http_status = 0, bool retryable = false)
      : Error(what), attempts_(attempts), http_status_(http_status), retryable_(retryable) {}

  int attempts() const noexcept { return attempts_; }
  int http_status() const noexcept { return http_status_; }
  bool retryable() const noexcept { return retryable_; }

 private:
  int attempts_;
  int http_status_;
  bool retryable_;
};

/// The endpoint answered but cannot provide what the engine needs (e.g. no logprobs).
class CapabilityError : public BackendError {
 public:
  explicit CapabilityError(const std::string& what) : BackendError(what, 1, 0, false) {}
};

/// The scripted backend was handed a context it did not produce.
class ScriptDesyncError : public BackendError {
 public:
  explicit ScriptDesyncError(const std::string& what) : BackendError(what, 1, 0, false) {}
};

/// Malformed input file; carries the 1-based line number when known.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace ars
