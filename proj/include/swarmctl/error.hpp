#pragma once

#include <stdexcept>
#include <string>

namespace swarmctl {

// Invalid controller or scenario structure (bad dimensions, bad ranges).
struct SpecError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Non-finite value produced while evaluating a measurement or control law.
struct EvalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Simulation aborted; message carries the offending agent id and step.
struct SimError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Config file or CSV input could not be parsed.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// GP factorization failed even after jitter escalation.
struct ModelError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace swarmctl
