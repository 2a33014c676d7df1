#pragma once

#include <stdexcept>
#include <string>

namespace nlrd {

/// Base class for all library errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Bad input: violated precondition, malformed config, out-of-domain argument.
/// CLI maps these to exit code 1.
struct ValidationError : Error {
    using Error::Error;
};

/// Numerical failure: divergent integral, tolerance not met, pole hit.
/// CLI maps these to exit code 2.
struct NumericalError : Error {
    using Error::Error;
};

struct DomainError : ValidationError {
    using ValidationError::ValidationError;
};

/// Evaluation at a pole (gamma at non-positive integers, gstar at eps in {0,-2,...}).
struct PoleError : NumericalError {
    using NumericalError::NumericalError;
};

/// A genuinely divergent quantity was requested (UV-divergent loop, Gamma(a,0) with a<=0).
struct DivergenceError : NumericalError {
    using NumericalError::NumericalError;
};

/// Adaptive quadrature or ODE integration could not reach the requested tolerance.
struct ToleranceError : NumericalError {
    using NumericalError::NumericalError;
};

/// F(k) = 0 encountered: parameters sit on the Model II critical manifold.
struct CriticalPointError : NumericalError {
    using NumericalError::NumericalError;
};

/// ODE solution escaped to infinity in finite time (paper-sign Riccati).
struct BlowUpError : NumericalError {
    using NumericalError::NumericalError;
};

/// Simulation exceeded the configured particle cap.
struct CapExceededError : NumericalError {
    using NumericalError::NumericalError;
};

/// Steady-state quadratic has no non-negative root.
struct NoRootError : NumericalError {
    using NumericalError::NumericalError;
};

}  // namespace nlrd
