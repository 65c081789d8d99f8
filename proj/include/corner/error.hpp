#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace corner {

// Invalid user configuration (bad law name, df <= 4, trials == 0, ...).
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(const std::string& field, const std::string& what)
      : std::invalid_argument(field + ": " + what), field_(field) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

// Precondition violation on a library call.
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Root finding or eigensolver failure. `context` names the level or gap.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& what, std::ptrdiff_t context = -1)
      : std::runtime_error(what), context_(context) {}
  std::ptrdiff_t context() const noexcept { return context_; }

 private:
  std::ptrdiff_t context_;
};

// Evaluation point coincides with a pole of a Stieltjes-type sum.
class PoleError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

// No eigenvalue at or to the right of the requested bulk energy.
class ExtractionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Output file could not be opened or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace corner
