#pragma once

#include <stdexcept>
#include <string>

namespace wl {

// Invalid construction input: bad parameter range, malformed config, model
// that violates a structural assumption (non-finite density, empty stratum).
struct ValidationError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Argument outside the domain of an otherwise valid object (state not in the
// space, step index 0, empty trace).
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

// Operation not defined for the given state space, e.g. exact transition
// matrices on the torus.
struct UnsupportedError : std::logic_error {
  using std::logic_error::logic_error;
};

// Numerical failure inside an oracle computation (solve residual too large,
// which usually signals an ergodicity violation).
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace wl
