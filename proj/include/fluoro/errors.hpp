// errors.hpp — exception types raised by the numerical routes

#pragma once

#include <stdexcept>
#include <string>

namespace fluoro {

// Base for every failure that originates in a numerical route.
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IntegrationBlowup : NumericalError {
    using NumericalError::NumericalError;
};

struct DegeneracyError : NumericalError {
    using NumericalError::NumericalError;
};

struct CutoffError : NumericalError {
    using NumericalError::NumericalError;
};

struct NoRelaxationError : NumericalError {
    using NumericalError::NumericalError;
};

struct MonodromyConsistencyError : NumericalError {
    using NumericalError::NumericalError;
};

struct WindowError : NumericalError {
    using NumericalError::NumericalError;
};

struct ResonanceError : NumericalError {
    using NumericalError::NumericalError;
};

// Bad user input (parameters, configuration).
struct ValidationError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

} // namespace fluoro
