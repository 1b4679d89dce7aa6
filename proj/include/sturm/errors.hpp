#pragma once

#include <stdexcept>
#include <string>

namespace sturm {

/// File-format and filesystem failures (bad magic, truncated payload, ...).
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

/// Numerical failures: non-finite values mid-solve, SVD breakdown,
/// symmetry-violating spectra.
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace sturm
