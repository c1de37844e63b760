#pragma once

#include <stdexcept>
#include <string>

namespace varsmooth {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid parameters or malformed configuration (bad penalty parameters,
/// unknown names, out-of-range step sizes).
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Caller violated an API precondition (dimension mismatch, wrong ordering
/// of smoothing parameters).
class UsageError : public Error {
public:
    using Error::Error;
};

/// Smoothing parameter mu outside the open interval (0, 1/rho).
class InvalidSmoothingError : public Error {
public:
    using Error::Error;
};

/// The operator does not support the requested operation (e.g. a least-norm
/// correction on a non-surjective operator).
class UnsupportedOperatorError : public Error {
public:
    using Error::Error;
};

/// An internal numeric routine failed to converge.
class NumericError : public Error {
public:
    using Error::Error;
};

} // namespace varsmooth
