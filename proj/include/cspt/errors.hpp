#pragma once

#include <stdexcept>
#include <string>

namespace cspt {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An argument lies outside the mathematical domain of the operation.
class DomainError : public Error {
public:
    using Error::Error;
};

/// A bracketing root finder could not find a sign change.
class NoRootError : public DomainError {
public:
    using DomainError::DomainError;
};

/// Matrix or vector shapes are inconsistent.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// A column submatrix is numerically rank deficient.
class RankDeficientError : public Error {
public:
    using Error::Error;
};

/// Exhaustive subset enumeration would exceed the configured limit.
class CombinatorialBlowupError : public Error {
public:
    using Error::Error;
};

/// xi/(1-mu) requested with mu >= 1.
class UndefinedRatioError : public DomainError {
public:
    using DomainError::DomainError;
};

/// File could not be opened, read or parsed.
class IoError : public Error {
public:
    using Error::Error;
};

} // namespace cspt
