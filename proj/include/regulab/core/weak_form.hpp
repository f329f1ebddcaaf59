#pragma once

#include "regulab/core/time_stepping.hpp"

#include <span>

namespace regulab {

/// Compactly supported C^2 bump used as a spatial test function.
///
/// PolynomialBump: (1 - s^2)^4 with s the position mapped onto [-1, 1].
/// SineBump:       sin^4(pi (x - a) / (b - a)).
/// Both vanish with their first three derivatives at the support ends.
class TestFunction {
public:
    enum class Kind { PolynomialBump, SineBump };

    TestFunction(Kind kind, double a, double b);

    Kind kind() const noexcept { return kind_; }
    double support_begin() const noexcept { return a_; }
    double support_end() const noexcept { return b_; }

    double value(double x) const;
    double d1(double x) const;
    double d2(double x) const;

private:
    Kind kind_;
    double a_;
    double b_;
};

/// Conservation law whose weak form is checked: u_t + F(u)_x = 0 with
/// F = -alpha u_x for Heat and F = u^2/2 for Burgers.
struct WeakEquation {
    enum class Kind { Heat, Burgers };
    Kind kind = Kind::Heat;
    double alpha = 1.0;

    static WeakEquation heat(double alpha) { return {Kind::Heat, alpha}; }
    static WeakEquation burgers() { return {Kind::Burgers, 0.0}; }
};

/// Residual of the weak formulation against a time-independent test function:
///   | [int u phi dx]_0^T - int_0^T int F(u) phi' dx dt |
/// with trapezoidal quadrature in x and t. The Heat flux uses centred
/// differences of u. Snapshots must be uniformly spaced in time (at least
/// three) and the support of phi must lie strictly inside the domain.
double weak_residual(std::span<const Snapshot> snapshots, const WeakEquation& equation,
                     const TestFunction& phi);

}  // namespace regulab
