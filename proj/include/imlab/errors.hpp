#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace imlab {

// Grid/field shape problems and malformed experiment descriptions.
class ConfigError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

// Numeric argument outside the range an operation accepts.
class ParameterError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

// Raised by the time stepper on NaN/Inf or runaway sup-norm growth.
class SimulationAborted : public std::runtime_error {
  public:
    SimulationAborted(const std::string& what, std::size_t step)
        : std::runtime_error(what + " (step " + std::to_string(step) + ")"), step_(step) {}

    std::size_t step() const noexcept { return step_; }

  private:
    std::size_t step_;
};

}  // namespace imlab
