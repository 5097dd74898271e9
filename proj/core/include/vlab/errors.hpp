#pragma once

#include <stdexcept>
#include <string>

namespace vlab {

// Base for everything thrown by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A parameter violates a documented precondition (point outside the disc,
// tolerance out of range, mesh too coarse, ...).
struct InvalidArgument : Error {
    using Error::Error;
};

// A sampled loop or trace is too coarse to resolve its phase (some adjacent
// angle gap reaches pi/2).
struct UndersampledError : Error {
    using Error::Error;
};

// A loop passes through (or too close to) the origin; its winding is undefined.
struct DegenerateLoopError : Error {
    using Error::Error;
};

// Topological degrees do not line up (unwrapping a trace with nonzero winding,
// zero count not matching the boundary degree, ...).
struct DegreeMismatch : Error {
    using Error::Error;
};

// An iterative routine failed to produce a usable result (line search stalled,
// non-finite values, ...).  Plain non-convergence inside the iteration budget
// is reported via flags, not exceptions.
struct NumericError : Error {
    using Error::Error;
};

// Malformed or inconsistent run configuration.
struct ConfigError : Error {
    using Error::Error;
};

// Filesystem trouble while reading configs or writing results.
struct IoError : Error {
    using Error::Error;
};

} // namespace vlab
