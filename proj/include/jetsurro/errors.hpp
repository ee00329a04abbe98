#pragma once

#include <stdexcept>
#include <string>

namespace jetsurro {

/// Base class for all library errors.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Input outside the mathematical domain of an operation (e.g. Fr at g0' = 0).
struct DomainError : Error {
  using Error::Error;
};

/// A physical invariant of a case or dataset is violated; message names the constraint.
struct ValidationError : Error {
  using Error::Error;
};

/// Grid sequence is not monotonically converging.
struct ConvergenceError : Error {
  using Error::Error;
};

/// Degenerate arithmetic (zero differences, r^p == 1, ...).
struct DegenerateError : Error {
  using Error::Error;
};

/// Matrix/vector dimensions do not match, or a curve lacks the required shape.
struct ShapeError : Error {
  using Error::Error;
};

/// Trajectory never reached the requested crossing within the integration budget.
struct TruncationError : Error {
  using Error::Error;
};

/// Integration exceeded its arc-length budget without terminating.
struct DivergenceError : Error {
  using Error::Error;
};

/// Non-finite state encountered mid-computation.
struct NumericError : Error {
  using Error::Error;
};

/// Rejection sampling could not produce the requested number of cases.
struct SamplingError : Error {
  using Error::Error;
};

/// Unknown column or feature name.
struct NameError : Error {
  using Error::Error;
};

/// Request exceeds a hard capability limit (e.g. exact Shapley with too many features).
struct CapabilityError : Error {
  using Error::Error;
};

/// Requested size exceeds the available data.
struct SizeError : Error {
  using Error::Error;
};

/// Every grid point of a hyperparameter search failed.
struct SearchError : Error {
  using Error::Error;
};

/// Non-finite or otherwise unusable training data.
struct DataError : Error {
  using Error::Error;
};

/// Malformed configuration or input file.
struct ConfigError : Error {
  using Error::Error;
};

/// A filter selected no instances.
struct EmptySelectionError : Error {
  using Error::Error;
};

}  // namespace jetsurro
