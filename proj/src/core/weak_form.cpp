#include "regulab/core/weak_form.hpp"

#include "regulab/core/errors.hpp"

#include <cmath>
#include <numbers>

namespace regulab {

TestFunction::TestFunction(Kind kind, double a, double b) : kind_(kind), a_(a), b_(b)
{
    if (!(b > a)) throw ValidationError("test function: empty support");
}

double TestFunction::value(double x) const
{
    if (x <= a_ || x >= b_) return 0.0;
    if (kind_ == Kind::PolynomialBump) {
        const double s = (2.0 * x - a_ - b_) / (b_ - a_);
        const double q = 1.0 - s * s;
        return q * q * q * q;
    }
    const double s = std::sin(std::numbers::pi * (x - a_) / (b_ - a_));
    return s * s * s * s;
}

double TestFunction::d1(double x) const
{
    if (x <= a_ || x >= b_) return 0.0;
    if (kind_ == Kind::PolynomialBump) {
        const double k = 2.0 / (b_ - a_);
        const double s = (2.0 * x - a_ - b_) / (b_ - a_);
        const double q = 1.0 - s * s;
        return -8.0 * k * s * q * q * q;
    }
    const double k = std::numbers::pi / (b_ - a_);
    const double th = k * (x - a_);
    const double s = std::sin(th);
    return 4.0 * k * s * s * s * std::cos(th);
}

double TestFunction::d2(double x) const
{
    if (x <= a_ || x >= b_) return 0.0;
    if (kind_ == Kind::PolynomialBump) {
        const double k = 2.0 / (b_ - a_);
        const double s = (2.0 * x - a_ - b_) / (b_ - a_);
        const double q = 1.0 - s * s;
        return -8.0 * k * k * q * q * (1.0 - 7.0 * s * s);
    }
    const double k = std::numbers::pi / (b_ - a_);
    const double th = k * (x - a_);
    const double s = std::sin(th);
    const double c = std::cos(th);
    return k * k * (12.0 * s * s * c * c - 4.0 * s * s * s * s);
}

double weak_residual(std::span<const Snapshot> snapshots, const WeakEquation& equation,
                     const TestFunction& phi)
{
    if (snapshots.size() < 3) throw ValidationError("weak residual: need at least 3 snapshots");
    const Grid1D& grid = snapshots.front().u.grid();
    if (phi.support_begin() <= grid.x_min() || phi.support_end() >= grid.x_max())
        throw ValidationError("weak residual: test function support touches the boundary");

    const double dt = snapshots[1].t - snapshots[0].t;
    if (!(dt > 0.0)) throw ValidationError("weak residual: snapshot times must increase");
    for (std::size_t k = 1; k < snapshots.size(); ++k) {
        if (!(snapshots[k].u.grid() == grid))
            throw ValidationError("weak residual: snapshots on different grids");
        if (std::abs(snapshots[k].t - snapshots[k - 1].t - dt) > 1e-9 * std::max(dt, 1.0))
            throw ValidationError("weak residual: snapshots are not uniformly spaced");
    }

    const std::size_t n = grid.size();
    const double dx = grid.dx();
    std::vector<double> phi_v(n), phi_d(n);
    for (std::size_t j = 0; j < n; ++j) {
        phi_v[j] = phi.value(grid.x(j));
        phi_d[j] = phi.d1(grid.x(j));
    }

    auto pairing = [&](const Field& u) {
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j) s += u[j] * phi_v[j];
        return s * dx;
    };
    auto flux_pairing = [&](const Field& u) {
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (phi_d[j] == 0.0) continue;
            double flux;
            if (equation.kind == WeakEquation::Kind::Burgers) {
                flux = 0.5 * u[j] * u[j];
            } else {
                const std::size_t jm = j == 0 ? n - 1 : j - 1;
                const std::size_t jp = j + 1 == n ? 0 : j + 1;
                flux = -equation.alpha * (u[jp] - u[jm]) / (2.0 * dx);
            }
            s += flux * phi_d[j];
        }
        return s * dx;
    };

    double time_integral = 0.0;
    for (std::size_t k = 0; k < snapshots.size(); ++k) {
        const double w = (k == 0 || k + 1 == snapshots.size()) ? 0.5 : 1.0;
        time_integral += w * flux_pairing(snapshots[k].u);
    }
    time_integral *= dt;

    const double boundary_in_time = pairing(snapshots.back().u) - pairing(snapshots.front().u);
    return std::abs(boundary_in_time - time_integral);
}

}  // namespace regulab
