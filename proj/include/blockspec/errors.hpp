#pragma once

#include <stdexcept>
#include <string>

namespace blockspec {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A factorization pivot fell below tolerance; the input is not usable as SPD.
struct NotPositiveDefinite : Error {
    using Error::Error;
};

/// The iterative eigensolver hit its iteration cap.
struct NoConvergence : Error {
    using Error::Error;
};

/// Input data produced a singular Gram block.
struct DegenerateData : Error {
    using Error::Error;
};

/// Adaptive quadrature could not reach the requested error estimate.
struct QuadratureFailure : Error {
    using Error::Error;
};

/// A moment system was infeasible for the requested distribution fit.
struct FitFailure : Error {
    using Error::Error;
};

/// Bad run configuration (CLI arguments, schedule files, dimension constraints).
struct ConfigError : Error {
    using Error::Error;
};

/// Filesystem failure, reported with path context.
struct IoError : Error {
    using Error::Error;
};

} // namespace blockspec
