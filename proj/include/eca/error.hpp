#pragma once

#include <stdexcept>
#include <string>

namespace eca {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid configuration: unknown keys, bad enum values, missing paths.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Malformed or invariant-violating input data.
class DataError : public Error {
 public:
  using Error::Error;
};

/// Knowledge-base access failure.
class KbError : public Error {
 public:
  KbError(const std::string& what, bool retryable) : Error(what), retryable_(retryable) {}
  bool retryable() const noexcept { return retryable_; }

 private:
  bool retryable_;
};

}  // namespace eca
