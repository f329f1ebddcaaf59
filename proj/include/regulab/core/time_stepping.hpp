#pragma once

#include "regulab/core/banded.hpp"
#include "regulab/core/field.hpp"

#include <functional>
#include <map>
#include <vector>

namespace regulab {

/// Fixed-step march to t_end. Snapshots are kept every `store_every` steps
/// and always at t = 0 and t_end. If t_end is not a multiple of dt the last
/// step is shortened to land on t_end.
struct StepControl {
    double dt = 1e-3;
    double t_end = 1.0;
    std::size_t store_every = 1;

    void validate() const;
    std::size_t full_steps() const;
    /// Length of the trailing partial step, or 0 when dt divides t_end.
    double remainder() const;
    std::size_t total_steps() const { return full_steps() + (remainder() > 0.0 ? 1 : 0); }
};

struct Snapshot {
    double t;
    Field u;
};

using Trajectory = std::vector<Snapshot>;

/// Drives `step(state, dt) -> State` through a StepControl and records
/// `observe(state)` at the stored instants.
template <class State, class Step, class Observe>
auto march(const StepControl& control, State state, Step&& step, Observe&& observe)
{
    control.validate();
    using Obs = decltype(observe(state));
    std::vector<std::pair<double, Obs>> out;
    out.emplace_back(0.0, observe(state));
    const std::size_t full = control.full_steps();
    for (std::size_t k = 1; k <= full; ++k) {
        state = step(state, control.dt);
        if (k % control.store_every == 0 || (k == full && control.remainder() == 0.0))
            out.emplace_back(static_cast<double>(k) * control.dt, observe(state));
    }
    if (const double r = control.remainder(); r > 0.0) {
        state = step(state, r);
        out.emplace_back(control.t_end, observe(state));
    }
    return std::make_pair(std::move(state), std::move(out));
}

/// Explicit right-hand side N(u) of an IMEX step.
using NonlinearRhs = std::function<std::vector<double>(const Field&)>;

/// Theta-method in the linear part, forward Euler in N:
///   (I - theta dt L) u+ = u + dt ((1 - theta) L u + N(u)).
/// Factorizations are cached per dt, so a stepper is meant to be used from a
/// single thread. On Dirichlet0 grids the boundary entries of the
/// right-hand side are forced to zero.
class ThetaStepper {
public:
    ThetaStepper(BandedMatrix linear, double theta);

    Field step(const Field& u, const NonlinearRhs& rhs, double dt) const;
    Field step(const Field& u, double dt) const;

    /// Solves (I - theta dt L) x = b with the cached factorization.
    std::vector<double> solve(std::vector<double> b, double dt) const;

    const BandedMatrix& linear() const noexcept { return linear_; }
    double theta() const noexcept { return theta_; }

    /// Builds the explicit part u + dt (1 - theta) L u into `out`.
    void explicit_part(std::span<const double> u, double dt, std::span<double> out) const;

private:
    const BandedLU& factor(double dt) const;

    BandedMatrix linear_;
    double theta_;
    mutable std::map<double, BandedLU> cache_;
};

Field imex_theta_step(const Field& u, const BandedMatrix& linear, const NonlinearRhs& rhs,
                      double dt, double theta);

}  // namespace regulab
