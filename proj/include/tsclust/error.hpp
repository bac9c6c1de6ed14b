#pragma once

#include <stdexcept>
#include <string>

namespace tsclust {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad configuration, bad arguments, or a violated precondition on parameters.
class UsageError : public Error {
public:
    using Error::Error;
};

/// Malformed, inconsistent, or missing input data.
class DataError : public Error {
public:
    using Error::Error;
};

/// A computation that is mathematically undefined for the given input
/// (zero denominator, coincident centroids, ...).
class DegenerateError : public Error {
public:
    using Error::Error;
};

}  // namespace tsclust
