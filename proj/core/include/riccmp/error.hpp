#pragma once

#include <stdexcept>
#include <string>

namespace riccmp {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Shapes or spaces of the operands do not agree.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// An operation was called outside its documented precondition.
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// The ODE integrator could not make progress (step underflow without escape).
class IntegrationError : public Error {
public:
    using Error::Error;
};

}  // namespace riccmp
