#pragma once

#include <stdexcept>

namespace otto {

// Root of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Input violates a documented matrix invariant (Hermiticity, unit trace, ...).
class ValidationError : public Error {
public:
    using Error::Error;
};

// Argument outside the domain of the operation (negative temperature, t > tau, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

// A computation did not reach the required accuracy.
class NumericError : public Error {
public:
    using Error::Error;
};

// A counterdiabatic term was requested at (or below) the gap floor.
class SingularityError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace otto
