#pragma once

#include <stdexcept>
#include <string>

namespace besq {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A precondition on user-supplied parameters was violated.
class ValidationError : public Error {
public:
    using Error::Error;
};

// A numerical procedure failed (non-convergence, degenerate input, ...).
class NumericalError : public Error {
public:
    using Error::Error;
};

// eval_poly hit an exact zero of the polynomial.
class ZeroHit : public NumericalError {
public:
    explicit ZeroHit(double x)
        : NumericalError("polynomial evaluates to exact zero at x=" + std::to_string(x)), x_(x) {}
    double x() const noexcept { return x_; }

private:
    double x_;
};

class NonConvergence : public NumericalError {
public:
    using NumericalError::NumericalError;
};

// A bracket between consecutive zeros of P_{k-1} showed no sign change of P_k.
class InterlacingViolation : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class InconsistentMembership : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class NonIntersectionViolation : public NumericalError {
public:
    using NumericalError::NumericalError;
};

inline void require(bool ok, const std::string& what) {
    if (!ok) throw ValidationError(what);
}

}  // namespace besq
