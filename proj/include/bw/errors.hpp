#pragma once

#include <stdexcept>
#include <string>

namespace bw {

/// Base class for all library errors.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Bad configuration or out-of-range parameter.
struct ParamError : Error {
  using Error::Error;
};

/// Malformed or missing input data (schema mismatch, empty file, bad row).
struct DataError : Error {
  using Error::Error;
};

/// Numerical failure (singular design, zero variance, divergence).
struct NumericError : Error {
  using Error::Error;
};

}  // namespace bw
