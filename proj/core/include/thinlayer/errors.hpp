#pragma once

#include <stdexcept>
#include <string>

namespace thinlayer {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A physical or numerical parameter lies outside its admissible range.
class ParameterError : public Error {
 public:
  ParameterError(std::string field, const std::string& what)
      : Error(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// Non-finite values, singular systems or failed fits.
class NumericalFailure : public Error {
 public:
  using Error::Error;
};

/// Evaluation point outside the data a routine was given (e.g. an images
/// extension that is too short for the requested cosine time).
class RangeError : public Error {
 public:
  using Error::Error;
};

/// The rank-two perturbation is not a contraction at the requested lambda.
class ResolventThresholdError : public Error {
 public:
  ResolventThresholdError(const std::string& what, double threshold)
      : Error(what), threshold_(threshold) {}
  double threshold() const noexcept { return threshold_; }

 private:
  double threshold_;
};

/// Inconsistent run configuration (mode/coefficient mismatch, grid mismatch).
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace thinlayer
