#ifndef QIDENT_ERRORS_HPP
#define QIDENT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace qident {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Discrete index or level outside its admissible set.
class RangeError : public Error {
public:
    using Error::Error;
};

/// A linear solve hit a numerically singular matrix.
class SingularMatrixError : public Error {
public:
    using Error::Error;
};

/// Covariance factorization failed (matrix not positive definite).
class FactorizationError : public Error {
public:
    using Error::Error;
};

/// Incompatible vector/matrix dimensions.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// Invalid experiment configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// File could not be read or written.
class IoError : public Error {
public:
    using Error::Error;
};

} // namespace qident

#endif
