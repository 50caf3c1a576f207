#pragma once

#include <stdexcept>
#include <string>

namespace gqed {

// Bad user input: malformed config, invalid geometry, unachievable design.
class ConfigError : public std::runtime_error {
  public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Numerical failure: stability guard hit, non-finite values, singular feedback.
class NumericError : public std::runtime_error {
  public:
    explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

// The Liouvillian null space has dimension != 1, so no unique steady state.
class DegenerateSteadyState : public NumericError {
  public:
    DegenerateSteadyState(const std::string& msg, int null_dim)
        : NumericError(msg), null_space_dim(null_dim) {}
    int null_space_dim;
};

}  // namespace gqed
