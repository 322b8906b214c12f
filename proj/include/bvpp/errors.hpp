#pragma once

#include <stdexcept>
#include <string>

namespace bvpp {

// Base class for all toolkit errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Two series that must live on the same TimeGrid do not.
struct GridMismatch : Error {
    using Error::Error;
};

// A series has the wrong length for its grid.
struct LengthMismatch : Error {
    using Error::Error;
};

struct CoefficientOutOfRange : Error {
    using Error::Error;
};

// Appliance name is not one of the built-in classified names.
struct UnknownAppliance : Error {
    using Error::Error;
};

// No feasible start exists inside an appliance's allowed window.
struct InfeasibleWindow : Error {
    using Error::Error;
};

// Battery specification violates its own bounds.
struct InfeasibleSpec : Error {
    using Error::Error;
};

// Clustering input cannot support the requested cluster count.
struct DegenerateInput : Error {
    using Error::Error;
};

// Scenario configuration failed validation; message carries the field path.
struct ConfigError : Error {
    using Error::Error;
};

// File could not be read, written, or parsed; message carries file and line.
struct IoError : Error {
    using Error::Error;
};

}  // namespace bvpp
