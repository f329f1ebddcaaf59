#pragma once

#include "regulab/core/field.hpp"
#include "regulab/core/time_stepping.hpp"
#include "regulab/greenlink/greenlink.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace regulab::rdnonlocal {

using Reaction = std::function<double(double)>;

/// u - u^3.
double bistable(double u) noexcept;

/// Activator-inhibitor system
///   u_t       = F(u) - g w + u_xx
///   tau w_t   = h u - f w + xi w_x + D w_xx
struct RDParams {
    double g = 0.5;
    double h = 1.0;
    double f = 1.0;
    double xi = 0.2;
    double D = 0.25;
    double tau = 1e-2;
    Reaction F = bistable;

    double sigma() const noexcept { return g * h; }
    /// sqrt(xi^2 + 4 D f).
    double s() const;
    void validate() const;
};

/// (f/s) exp(-(s/2D)|x|) exp(xi x / 2D) on the periodic grid. Both decay
/// rates must fall below 1e-12 across half the domain.
greenlink::Kernel asym_kernel(const RDParams& p, const Grid1D& grid,
                              greenlink::KernelSampling sampling = greenlink::KernelSampling::Auto);

/// Green's function of the inhibitor equation exactly as written above, i.e.
/// asym_kernel mirrored in x (the written advection sign is +xi w_x).
greenlink::Kernel inhibitor_green(const RDParams& p, const Grid1D& grid,
                                  greenlink::KernelSampling sampling =
                                      greenlink::KernelSampling::Auto);

struct SystemSnapshot {
    double t;
    Field u;
    Field w;
};

using SystemTrajectory = std::vector<SystemSnapshot>;

/// Right-hand sides (u_t, tau w_t) at a state; the inhibitor advection is the
/// same upwind difference the solver uses.
std::pair<std::vector<double>, std::vector<double>> system_rhs(const Field& u, const Field& w,
                                                              const RDParams& p);

/// Explicit-part dt limit tau / (f + |xi| / dx) of the inhibitor update.
double system_dt_limit(const RDParams& p, const Grid1D& grid);

/// Crank-Nicolson in both diffusions, forward Euler for reaction, coupling,
/// decay and upwind advection. Periodic grid, tau > 0.
SystemTrajectory full_system_solve(const Field& u0, const Field& w0, const RDParams& p,
                                   const StepControl& step);

/// u_t = F(u) + u_xx - coupling * (kernel * u), Crank-Nicolson diffusion.
Trajectory nonlocal_scalar_solve(const Field& u0, const Reaction& F, double coupling,
                                 const greenlink::Kernel& kernel, const StepControl& step);

/// Same with coupling = p.sigma().
Trajectory nonlocal_scalar_solve(const Field& u0, const RDParams& p,
                                 const greenlink::Kernel& kernel, const StepControl& step);

/// Homogeneous steady state u* = sqrt(1 - sigma/f), w* = h u*/f of the
/// bistable system (needs sigma < f).
std::pair<double, double> bistable_steady_state(const RDParams& p);

struct TauLimitMember {
    double tau;
    Field u_final;
    double discrepancy;  // L2 distance to the scalar limit at t_end
};

struct TauLimitReport {
    Field scalar_final;
    double coupling;     // sigma / f, the limit coupling of the written system
    std::vector<TauLimitMember> members;
    bool nonincreasing;
};

/// For each tau (strictly decreasing, positive) runs the full system and
/// compares u at t_end with the scalar limit driven by inhibitor_green and
/// coupling sigma / f. Without `w0` the inhibitor starts slaved,
/// w0 = (h/f) inhibitor_green * u0.
TauLimitReport tau_limit_report(const Field& u0, const std::optional<Field>& w0,
                                const RDParams& p, const std::vector<double>& tau_list,
                                const StepControl& step);

}  // namespace regulab::rdnonlocal
