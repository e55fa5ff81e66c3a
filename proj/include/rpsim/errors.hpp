#pragma once

#include <stdexcept>
#include <string>

namespace rpsim {

// Invalid system description, step-size policy violation, bad scenario file.
class ConfigError : public std::runtime_error {
public:
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Caller misuse of an otherwise valid API (empty series, zero trace, ...).
class UsageError : public std::runtime_error {
public:
  explicit UsageError(const std::string& msg) : std::runtime_error(msg) {}
};

// Numerical-integrity failure: positivity breach, imaginary residue, ...
class NumericError : public std::runtime_error {
public:
  explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace rpsim
