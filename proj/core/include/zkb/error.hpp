#pragma once

#include <stdexcept>
#include <string>

namespace zkb {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid parameters: domain, stepper, norm or run configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Field shapes disagree with the domain they are used with.
class ShapeMismatch : public Error {
 public:
  using Error::Error;
};

/// Input that cannot be interpreted (NaN samples, non-Hermitian spectra, ...).
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// A norm left the guard band, or a non-finite value appeared, while stepping.
class NumericalBlowup : public Error {
 public:
  NumericalBlowup(double time, const std::string& what)
      : Error(what), time_(time) {}
  double time() const noexcept { return time_; }

 private:
  double time_;
};

/// Picard iteration did not reach its tolerance.
class ContractionFailure : public Error {
 public:
  using Error::Error;
};

/// A trajectory lacks the samples or diagnostics an analysis needs.
class InsufficientData : public Error {
 public:
  using Error::Error;
};

}  // namespace zkb
