#pragma once

#include <stdexcept>
#include <string>

namespace cavity {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// An operation was handed a membrane of the wrong kind (slab vs thin scatterer).
class KindMismatch : public Error {
public:
    using Error::Error;
};

/// The requested frequency is not a resonance of the configuration.
class NotAMode : public Error {
public:
    using Error::Error;
};

/// Numerical procedure could not produce a trustworthy answer.
class SolverFailure : public Error {
public:
    using Error::Error;
};

/// Nearest-root tracking jumped to a different resonance branch.
class BranchTrackingFailure : public SolverFailure {
public:
    using SolverFailure::SolverFailure;
};

}  // namespace cavity
