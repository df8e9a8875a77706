#pragma once

#include <stdexcept>
#include <string>

namespace gpassure {

// Caller supplied something outside an operation's contract (bad dimension,
// out-of-range parameter, empty input).
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Malformed dataset or model file. Messages carry the line and field when known.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Covariance matrix could not be factorized even after jitter escalation.
class FitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// No grid point produced a usable fit.
class SelectionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace gpassure
