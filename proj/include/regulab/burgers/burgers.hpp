#pragma once

#include "regulab/core/banded.hpp"
#include "regulab/core/field.hpp"
#include "regulab/core/time_stepping.hpp"

#include <vector>

namespace regulab::burgers {

/// Largest admissible Courant number dt * max|u| / dx for explicit transport.
inline constexpr double kMaxCourant = 0.9;

/// Exact Riemann (Godunov) flux for f(u) = u^2 / 2.
double godunov_flux(double left, double right) noexcept;

/// Courant number of a step; throws CflError above kMaxCourant.
double check_cfl(const Field& u, double dt);

/// First-order conservative Godunov update. Dirichlet0 boundary nodes act as
/// ghost cells holding 0; Neumann0 mirrors u_{-1} = u_1.
Field godunov_step(const Field& u, double dt);

/// Explicit transport term -(F_{j+1/2} - F_{j-1/2}) / dx with MUSCL
/// reconstruction (van Leer limiter) and Godunov flux at the interfaces.
/// Entries on Dirichlet0 boundary nodes are zero.
std::vector<double> muscl_advection(const Field& u);

/// Viscous Burgers stepper: Heun for the advection term, theta-implicit
/// (Crank-Nicolson by default) for epsilon * diff2. Holds the factorization, so use one instance per thread.
class ViscousStepper {
public:
    ViscousStepper(const Grid1D& grid, double epsilon, double theta = 0.5);
    Field step(const Field& u, double dt) const;
    double epsilon() const noexcept { return epsilon_; }

private:
    double epsilon_;
    ThetaStepper diffusion_;
};

Field viscous_step(const Field& u, double epsilon, double dt);

/// Runs to step.t_end; epsilon = 0 selects the Godunov path.
Trajectory solve(const Field& u0, double epsilon, const StepControl& step,
                 double theta = 0.5);

/// Largest |u_{j+1} - u_j| / dx over the cells of the grid.
double max_gradient(const Field& u);

struct SweepMember {
    double epsilon;
    Field u_final;
    double l1_distance;
    double max_gradient;
};

struct SweepReport {
    double t_end;
    Field reference;  // epsilon = 0 Godunov solution at t_end
    std::vector<SweepMember> members;
    bool distances_nonincreasing;
    bool profiles_steepen;
};

/// Runs every epsilon (strictly decreasing, positive) plus the Godunov
/// reference and compares final profiles in L1.
SweepReport vanishing_viscosity_sweep(const Field& u0, const std::vector<double>& eps_list,
                                      const StepControl& step, double theta = 0.5);

}  // namespace regulab::burgers
