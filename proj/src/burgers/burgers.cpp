#include "regulab/burgers/burgers.hpp"

#include "regulab/core/errors.hpp"
#include "regulab/core/parallel.hpp"
#include "regulab/core/stencil.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace regulab::burgers {

namespace {

double flux(double u) noexcept { return 0.5 * u * u; }

// Values with two ghost cells on each side, following the boundary kind.
std::vector<double> padded(const Field& u)
{
    const std::size_t n = u.size();
    std::vector<double> p(n + 4);
    for (std::size_t j = 0; j < n; ++j) p[j + 2] = u[j];
    switch (u.grid().bc()) {
    case Boundary::Periodic:
        p[0] = u[n - 2];
        p[1] = u[n - 1];
        p[n + 2] = u[0];
        p[n + 3] = u[1];
        break;
    case Boundary::Dirichlet0:
        p[0] = p[1] = p[n + 2] = p[n + 3] = 0.0;
        break;
    case Boundary::Neumann0:
        p[0] = u[2];
        p[1] = u[1];
        p[n + 2] = u[n - 2];
        p[n + 3] = u[n - 3];
        break;
    }
    return p;
}

double van_leer(double a, double b) noexcept
{
    return a * b > 0.0 ? 2.0 * a * b / (a + b) : 0.0;
}

// Flux divergence for padded values; `slopes` selects MUSCL reconstruction.
std::vector<double> transport(const Field& u, bool slopes)
{
    const std::size_t n = u.size();
    const auto p = padded(u);
    std::vector<double> s(n + 4, 0.0);
    if (slopes)
        for (std::size_t i = 1; i + 1 < p.size(); ++i)
            s[i] = van_leer(p[i] - p[i - 1], p[i + 1] - p[i]);
    // Face i sits between padded cells i and i+1, i = 1 .. n+1.
    std::vector<double> face(n + 4, 0.0);
    for (std::size_t i = 1; i <= n + 1; ++i)
        face[i] = godunov_flux(p[i] + 0.5 * s[i], p[i + 1] - 0.5 * s[i + 1]);
    const double inv_dx = 1.0 / u.grid().dx();
    std::vector<double> out(n);
    for (std::size_t j = 0; j < n; ++j) out[j] = -(face[j + 2] - face[j + 1]) * inv_dx;
    if (u.grid().bc() == Boundary::Dirichlet0) out.front() = out.back() = 0.0;
    return out;
}

}  // namespace

double godunov_flux(double left, double right) noexcept
{
    if (left > right) {
        // Shock moving with speed (left + right) / 2.
        return left + right > 0.0 ? flux(left) : flux(right);
    }
    if (left > 0.0) return flux(left);
    if (right < 0.0) return flux(right);
    return 0.0;
}

double check_cfl(const Field& u, double dt)
{
    const double ratio = dt * norm_inf(u.values()) / u.grid().dx();
    if (ratio > kMaxCourant)
        throw CflError("burgers: Courant number " + std::to_string(ratio) + " exceeds " +
                           std::to_string(kMaxCourant),
                       ratio);
    return ratio;
}

Field godunov_step(const Field& u, double dt)
{
    check_cfl(u, dt);
    auto rate = transport(u, false);
    for (std::size_t j = 0; j < rate.size(); ++j) rate[j] = u[j] + dt * rate[j];
    return Field(u.grid(), std::move(rate));
}

std::vector<double> muscl_advection(const Field& u) { return transport(u, true); }

namespace {

BandedMatrix scaled_laplacian(const Grid1D& grid, double epsilon)
{
    if (!(epsilon > 0.0)) throw ValidationError("viscous burgers: epsilon must be positive");
    return diff2_matrix(grid).affine(0.0, epsilon);
}

double check_theta(double theta)
{
    if (!(theta >= 0.5 && theta <= 1.0))
        throw ValidationError("viscous burgers: theta must lie in [0.5, 1]");
    return theta;
}

}  // namespace

ViscousStepper::ViscousStepper(const Grid1D& grid, double epsilon, double theta)
    : epsilon_(epsilon), diffusion_(scaled_laplacian(grid, epsilon), check_theta(theta))
{
}

Field ViscousStepper::step(const Field& u, double dt) const
{
    check_cfl(u, dt);
    const std::size_t n = u.size();
    const bool dirichlet = u.grid().bc() == Boundary::Dirichlet0;
    const auto a0 = muscl_advection(u);

    std::vector<double> base(n);
    diffusion_.explicit_part(u.values(), dt, base);

    std::vector<double> b(n);
    for (std::size_t j = 0; j < n; ++j) b[j] = base[j] + dt * a0[j];
    if (dirichlet) b.front() = b.back() = 0.0;
    auto stage = diffusion_.solve(std::move(b), dt);
    if (dirichlet) stage.front() = stage.back() = 0.0;
    const Field predictor(u.grid(), std::move(stage));

    check_cfl(predictor, dt);
    const auto a1 = muscl_advection(predictor);
    std::vector<double> c(n);
    for (std::size_t j = 0; j < n; ++j) c[j] = base[j] + 0.5 * dt * (a0[j] + a1[j]);
    if (dirichlet) c.front() = c.back() = 0.0;
    auto next = diffusion_.solve(std::move(c), dt);
    if (dirichlet) next.front() = next.back() = 0.0;
    return Field(u.grid(), std::move(next));
}

Field viscous_step(const Field& u, double epsilon, double dt)
{
    return ViscousStepper(u.grid(), epsilon).step(u, dt);
}

Trajectory solve(const Field& u0, double epsilon, const StepControl& step, double theta)
{
    if (epsilon < 0.0) throw ValidationError("burgers: epsilon must be >= 0");
    auto keep = [](const Field& f) { return f; };
    std::vector<std::pair<double, Field>> stored;
    if (epsilon == 0.0) {
        stored = march(step, u0, [](const Field& u, double dt) { return godunov_step(u, dt); },
                       keep)
                     .second;
    } else {
        const ViscousStepper stepper(u0.grid(), epsilon, theta);
        stored = march(step, u0,
                       [&](const Field& u, double dt) { return stepper.step(u, dt); }, keep)
                     .second;
    }
    Trajectory out;
    out.reserve(stored.size());
    for (auto& [t, f] : stored) out.push_back({t, std::move(f)});
    return out;
}

double max_gradient(const Field& u)
{
    const std::size_t n = u.size();
    const std::size_t cells = u.grid().cell_count();
    double g = 0.0;
    for (std::size_t j = 0; j < cells; ++j)
        g = std::max(g, std::abs(u[(j + 1) % n] - u[j]));
    return g / u.grid().dx();
}

SweepReport vanishing_viscosity_sweep(const Field& u0, const std::vector<double>& eps_list,
                                      const StepControl& step, double theta)
{
    if (eps_list.empty()) throw ValidationError("viscosity sweep: empty epsilon list");
    for (std::size_t i = 0; i < eps_list.size(); ++i) {
        if (!(eps_list[i] > 0.0))
            throw ValidationError("viscosity sweep: every epsilon must be positive");
        if (i > 0 && !(eps_list[i] < eps_list[i - 1]))
            throw ValidationError("viscosity sweep: epsilon list must be strictly decreasing");
    }
    step.validate();

    // Index 0 is the Godunov reference, the rest follow eps_list.
    auto finals = parallel_map(eps_list.size() + 1, [&](std::size_t i) {
        const double eps = i == 0 ? 0.0 : eps_list[i - 1];
        return solve(u0, eps, step, theta).back().u;
    });

    SweepReport report{step.t_end, finals.front(), {}, true, true};
    for (std::size_t i = 0; i < eps_list.size(); ++i) {
        const Field& f = finals[i + 1];
        report.members.push_back(
            {eps_list[i], f, l1_distance(f, report.reference), max_gradient(f)});
        if (i > 0) {
            const auto& prev = report.members[i - 1];
            const auto& cur = report.members[i];
            if (cur.l1_distance > prev.l1_distance) report.distances_nonincreasing = false;
            if (!(cur.max_gradient > prev.max_gradient)) report.profiles_steepen = false;
        }
    }
    return report;
}

}  // namespace regulab::burgers
