#pragma once

#include <stdexcept>
#include <string>

namespace regulab {

/// Input violates an operation's precondition (bad grid, bad parameter, ...).
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A pivot fell below the relative singularity threshold during factorization.
class SingularMatrixError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Explicit transport step exceeded its Courant limit.
class CflError : public std::runtime_error {
public:
    CflError(const std::string& what, double ratio)
        : std::runtime_error(what), ratio_(ratio) {}
    double ratio() const noexcept { return ratio_; }

private:
    double ratio_;
};

/// Explicit part of an IMEX step violates its stability restriction.
class StabilityError : public std::runtime_error {
public:
    StabilityError(const std::string& what, double dt, double dt_max)
        : std::runtime_error(what), dt_(dt), dt_max_(dt_max) {}
    double dt() const noexcept { return dt_; }
    double dt_max() const noexcept { return dt_max_; }

private:
    double dt_;
    double dt_max_;
};

/// Periodic domain too narrow to emulate the full line for a decaying kernel.
class DomainTooSmallError : public ValidationError {
public:
    DomainTooSmallError(const std::string& what, double required_width)
        : ValidationError(what), required_width_(required_width) {}
    double required_width() const noexcept { return required_width_; }

private:
    double required_width_;
};

}  // namespace regulab
