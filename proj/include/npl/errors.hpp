#pragma once

#include <stdexcept>
#include <string>

namespace npl {

// Bad parameters or preconditions violated by the caller.
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Grid kind or dimension the operation does not support.
class UnsupportedGrid : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A field is not resolved by the spectral basis, or a grid is too coarse
// for a construction.
class ResolutionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Non-finite values or magnitudes past the overflow threshold. Blow-up
// is expected behaviour here, so evolution code converts this into an
// outcome instead of propagating it.
class OverflowError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Fitting routines: too few samples, degenerate windows.
class FitError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace npl
