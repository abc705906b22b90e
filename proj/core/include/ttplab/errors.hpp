#pragma once

#include <stdexcept>
#include <string>

namespace ttplab {

// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Configuration / schema problems (wrong alpha arity, bad JSON, bad params).
struct ConfigError : Error {
    using Error::Error;
};

// Evaluation outside the scenario's space-time domain.
struct DomainError : Error {
    using Error::Error;
};

// A sample with rho <= 0 or otherwise unusable field values.
struct InvalidSampleError : Error {
    using Error::Error;
};

// Kinetic pressure lost positivity (p0 too small, or a step went bad).
struct PositivityError : Error {
    using Error::Error;
};

// Degenerate heat-capacity denominator in the heat source.
struct SingularityError : Error {
    using Error::Error;
};

// |grad p1_hat| below threshold: the isobaric direction b is undefined.
struct DegenerateGradientError : Error {
    using Error::Error;
};

// Initial state violates the tracer admissibility constraints.
struct InvalidInitialConditionError : Error {
    using Error::Error;
};

// Root finding / bracketing failure.
struct SolverError : Error {
    using Error::Error;
};

// Integrator step rejected (caller may retry with smaller dt).
struct StepRejectedError : Error {
    using Error::Error;
};

// Not enough samples for a requested statistic.
struct InsufficientSamplesError : Error {
    using Error::Error;
};

// Monte-Carlo estimation failure (e.g. order too high for sample count).
struct EstimationError : Error {
    using Error::Error;
};

// A numerical cross-check could not be evaluated reliably.
struct NumericalCheckError : Error {
    using Error::Error;
};

}  // namespace ttplab
