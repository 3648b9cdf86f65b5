#pragma once

#include <stdexcept>
#include <string>

namespace dlatom {

/// Invalid physical parameters, field models or problem definitions.
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Non-finite state, non-Hermitian generator or a failed eigensolver
/// residual check.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised when a spectral estimate finds no dominant oscillation.
class NoOscillation : public std::runtime_error {
public:
    NoOscillation() : std::runtime_error("no oscillation detected") {}
};

}  // namespace dlatom
