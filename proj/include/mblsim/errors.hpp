#pragma once

#include <stdexcept>

namespace mblsim {

// Exit-code mapping used by the CLI: config 2, capacity 3, convergence 4.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CapacityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConvergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Beatnote sits too close to a motional mode.
struct ResonanceError : ConfigError {
  using ConfigError::ConfigError;
};

// Transverse confinement too weak for a linear chain.
struct ZigZagInstabilityError : ConfigError {
  using ConfigError::ConfigError;
};

}  // namespace mblsim
