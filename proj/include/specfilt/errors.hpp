#pragma once

#include <stdexcept>
#include <string>

namespace specfilt {

/// Invalid or inconsistent experiment configuration (CLI exit code 2).
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Numerical failure with diagnostics (CLI exit code 3): solver stalls,
/// violated certificates, impossible spectra.
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace specfilt
