#include "regulab/core/time_stepping.hpp"

#include "regulab/core/errors.hpp"

#include <cmath>
#include <string>

namespace regulab {

void StepControl::validate() const
{
    if (!(dt > 0.0) || !std::isfinite(dt))
        throw ValidationError("step control: dt must be positive");
    if (!(t_end >= dt) || !std::isfinite(t_end))
        throw ValidationError("step control: require 0 < dt <= t_end");
    if (store_every == 0) throw ValidationError("step control: store_every must be >= 1");
}

std::size_t StepControl::full_steps() const
{
    const double ratio = t_end / dt;
    const double rounded = std::round(ratio);
    if (std::abs(ratio - rounded) <= 1e-9 * std::max(1.0, ratio))
        return static_cast<std::size_t>(rounded);
    return static_cast<std::size_t>(std::floor(ratio));
}

double StepControl::remainder() const
{
    const double r = t_end - static_cast<double>(full_steps()) * dt;
    return r > 1e-12 * t_end ? r : 0.0;
}

ThetaStepper::ThetaStepper(BandedMatrix linear, double theta)
    : linear_(std::move(linear)), theta_(theta)
{
    if (!(theta >= 0.0 && theta <= 1.0))
        throw ValidationError("theta stepper: theta must lie in [0, 1]");
}

const BandedLU& ThetaStepper::factor(double dt) const
{
    auto it = cache_.find(dt);
    if (it == cache_.end())
        it = cache_.emplace(dt, BandedLU(linear_.affine(1.0, -theta_ * dt))).first;
    return it->second;
}

void ThetaStepper::explicit_part(std::span<const double> u, double dt, std::span<double> out) const
{
    if (theta_ < 1.0) {
        const auto lu = linear_.apply(u);
        for (std::size_t j = 0; j < u.size(); ++j) out[j] = u[j] + dt * (1.0 - theta_) * lu[j];
    } else {
        for (std::size_t j = 0; j < u.size(); ++j) out[j] = u[j];
    }
}

std::vector<double> ThetaStepper::solve(std::vector<double> b, double dt) const
{
    factor(dt).solve_in_place(b);
    return b;
}

Field ThetaStepper::step(const Field& u, const NonlinearRhs& rhs, double dt) const
{
    std::vector<double> b(u.size());
    explicit_part(u.values(), dt, b);
    if (rhs) {
        const auto n = rhs(u);
        if (n.size() != u.size()) throw ValidationError("theta stepper: rhs size mismatch");
        for (std::size_t j = 0; j < b.size(); ++j) b[j] += dt * n[j];
    }
    if (u.grid().bc() == Boundary::Dirichlet0) b.front() = b.back() = 0.0;
    factor(dt).solve_in_place(b);
    if (u.grid().bc() == Boundary::Dirichlet0) b.front() = b.back() = 0.0;
    return Field(u.grid(), std::move(b));
}

Field ThetaStepper::step(const Field& u, double dt) const { return step(u, NonlinearRhs{}, dt); }

Field imex_theta_step(const Field& u, const BandedMatrix& linear, const NonlinearRhs& rhs,
                      double dt, double theta)
{
    if (linear.size() != u.size()) throw ValidationError("imex step: operator size mismatch");
    return ThetaStepper(linear, theta).step(u, rhs, dt);
}

}  // namespace regulab
