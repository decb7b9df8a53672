#pragma once

#include <stdexcept>
#include <string>

namespace dqc {

// Numeric failures (exit code 2 at the CLI level).
struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NotHermitian : NumericError {
    using NumericError::NumericError;
};
struct NoConvergence : NumericError {
    using NumericError::NumericError;
};
struct NotPSD : NumericError {
    using NumericError::NumericError;
};
struct DimensionMismatch : NumericError {
    using NumericError::NumericError;
};
struct NotDensityMatrix : NumericError {
    using NumericError::NumericError;
};
struct Overflow : NumericError {
    using NumericError::NumericError;
};
struct InvalidTemperature : NumericError {
    using NumericError::NumericError;
};
// Closed form and brute-force oracle disagree beyond tolerance.
struct OracleMismatch : NumericError {
    using NumericError::NumericError;
};

// Bad command line or config file (exit code 1).
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace dqc
