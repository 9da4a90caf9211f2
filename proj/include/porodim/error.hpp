#pragma once

#include <stdexcept>
#include <string>

namespace porodim {

/// Raised when an argument lies outside its admissible range. The CLI maps
/// this to exit code 1.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A request reached past the realized depth of a tree or the configured
/// maximum address depth.
class DepthError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// The measure handed to an operation violates its own contract (all-zero
/// offspring vector on a visited node, zero Lyapunov denominator, ...).
class MalformedMeasure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An iterative method did not reach its tolerance.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline void require(bool ok, const std::string& what) {
  if (!ok) throw ParameterError(what);
}

}  // namespace detail
}  // namespace porodim
