#pragma once

#include <stdexcept>
#include <string>

namespace tpnls {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// (omega, gamma) lies in the non-existence region or on its boundary curve.
class NotExistsError : public Error {
public:
    using Error::Error;
};

/// Argument outside the admissible domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

/// An iterative method stopped before meeting its tolerance.
class NonConvergenceError : public Error {
public:
    using Error::Error;
};

/// Finite-difference linear operator is numerically singular.
class SingularOperatorError : public Error {
public:
    using Error::Error;
};

}  // namespace tpnls
