#include "regulab/rdnonlocal/rdnonlocal.hpp"

#include "regulab/core/errors.hpp"
#include "regulab/core/parallel.hpp"
#include "regulab/core/stencil.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace regulab::rdnonlocal {

using greenlink::Kernel;
using greenlink::KernelSampling;

double bistable(double u) noexcept { return u - u * u * u; }

double RDParams::s() const { return std::sqrt(xi * xi + 4.0 * D * f); }

void RDParams::validate() const
{
    if (!(D > 0.0)) throw ValidationError("rd params: D must be positive");
    if (!(f > 0.0)) throw ValidationError("rd params: f must be positive");
    if (!(tau >= 0.0)) throw ValidationError("rd params: tau must be >= 0");
    if (!std::isfinite(g) || !std::isfinite(h) || !std::isfinite(xi))
        throw ValidationError("rd params: g, h, xi must be finite");
    if (!F) throw ValidationError("rd params: missing reaction function");
}

namespace {

constexpr double kRdWidthTolerance = 1e-12;

// Decay rates of the kernel for x > 0 and x < 0; `sign` = -1 mirrors it.
std::pair<double, double> rates(const RDParams& p, double sign)
{
    const double s = p.s();
    const double xi = sign * p.xi;
    return {(s - xi) / (2.0 * p.D), (s + xi) / (2.0 * p.D)};
}

Kernel sample(const RDParams& p, const Grid1D& grid, KernelSampling sampling, double sign)
{
    p.validate();
    if (!grid.periodic()) throw ValidationError("rd kernel: grid must be Periodic");
    const auto [right, left] = rates(p, sign);
    const double slow = std::min(right, left);
    const double required = 2.0 * std::log(1.0 / kRdWidthTolerance) / slow;
    if (!(std::exp(-slow * 0.5 * grid.length()) < kRdWidthTolerance))
        throw DomainTooSmallError("rd kernel: domain length " + std::to_string(grid.length()) +
                                      " too small, need at least " + std::to_string(required),
                                  required);

    const double dx = grid.dx();
    const double hdx = 0.5 * dx;
    const double amp = p.f / p.s();
    if (sampling == KernelSampling::Auto)
        sampling = dx * std::max(right, left) <= greenlink::kKinkResolution
                       ? KernelSampling::KinkCorrected
                       : KernelSampling::CellAverage;

    const std::size_t n = grid.size();
    std::vector<double> v(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double x = greenlink::signed_offset(grid, j);
        // Distance and rate by side; with xi = 0 both sides use identical
        // arithmetic, so the sampled kernel is exactly even.
        const double r = std::abs(x);
        const double k = x >= 0.0 ? right : left;
        if (sampling != KernelSampling::CellAverage) {
            v[j] = amp * std::exp(-k * r);
        } else if (j == 0) {
            v[j] = amp * (-std::expm1(-right * hdx) / right - std::expm1(-left * hdx) / left) / dx;
        } else {
            v[j] = amp * std::exp(-k * r) * 2.0 * std::sinh(k * hdx) / (k * dx);
        }
    }
    // Slope jump at the origin is -f/D.
    if (sampling == KernelSampling::KinkCorrected) v[0] -= dx * p.f / (12.0 * p.D);
    const double cutoff = 1e-14 * *std::max_element(v.begin(), v.end());
    for (double& x : v)
        if (std::abs(x) < cutoff) x = 0.0;

    Kernel out{grid, std::move(v), 0.0, 0.0};
    double m = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        m += out.values[j];
        if (out.values[j] != 0.0)
            out.support_radius =
                std::max(out.support_radius, std::abs(greenlink::signed_offset(grid, j)));
    }
    out.mass = m * dx;
    return out;
}

}  // namespace

Kernel asym_kernel(const RDParams& p, const Grid1D& grid, KernelSampling sampling)
{
    return sample(p, grid, sampling, 1.0);
}

Kernel inhibitor_green(const RDParams& p, const Grid1D& grid, KernelSampling sampling)
{
    return sample(p, grid, sampling, -1.0);
}

namespace {

// xi * w_x by upwinding: the term transports w with velocity -xi.
std::vector<double> upwind_advection(const Field& w, double xi)
{
    const std::size_t n = w.size();
    const double c = xi / w.grid().dx();
    std::vector<double> out(n);
    for (std::size_t j = 0; j < n; ++j) {
        const std::size_t jp = (j + 1) % n, jm = (j + n - 1) % n;
        out[j] = xi >= 0.0 ? c * (w[jp] - w[j]) : c * (w[j] - w[jm]);
    }
    return out;
}

void require_periodic(const Field& u, const char* who)
{
    if (!u.grid().periodic()) throw ValidationError(std::string(who) + ": grid must be Periodic");
}

}  // namespace

std::pair<std::vector<double>, std::vector<double>> system_rhs(const Field& u, const Field& w,
                                                              const RDParams& p)
{
    require_same_grid(u, w, "system rhs");
    const Field lu = diff2(u);
    const Field lw = diff2(w);
    const auto adv = upwind_advection(w, p.xi);
    std::vector<double> ru(u.size()), rw(u.size());
    for (std::size_t j = 0; j < u.size(); ++j) {
        ru[j] = p.F(u[j]) - p.g * w[j] + lu[j];
        rw[j] = p.h * u[j] - p.f * w[j] + adv[j] + p.D * lw[j];
    }
    return {std::move(ru), std::move(rw)};
}

double system_dt_limit(const RDParams& p, const Grid1D& grid)
{
    return p.tau / (p.f + std::abs(p.xi) / grid.dx());
}

SystemTrajectory full_system_solve(const Field& u0, const Field& w0, const RDParams& p,
                                   const StepControl& step)
{
    p.validate();
    if (!(p.tau > 0.0)) throw ValidationError("full system: tau must be positive");
    require_periodic(u0, "full system");
    require_same_grid(u0, w0, "full system");
    step.validate();
    const double limit = system_dt_limit(p, u0.grid());
    if (step.dt > limit)
        throw StabilityError("full system: dt " + std::to_string(step.dt) +
                                 " exceeds explicit limit " + std::to_string(limit),
                             step.dt, limit);

    const auto lap = diff2_matrix(u0.grid());
    const ThetaStepper su(lap, 0.5);
    const ThetaStepper sw(lap.affine(0.0, p.D / p.tau), 0.5);
    using State = std::pair<Field, Field>;
    auto advance = [&](const State& s, double dt) {
        const auto& [u, w] = s;
        const auto adv = upwind_advection(w, p.xi);
        const std::size_t n = u.size();
        std::vector<double> nu(n), nw(n);
        for (std::size_t j = 0; j < n; ++j) {
            nu[j] = p.F(u[j]) - p.g * w[j];
            nw[j] = (p.h * u[j] - p.f * w[j] + adv[j]) / p.tau;
        }
        return State(su.step(u, [&](const Field&) { return nu; }, dt),
                     sw.step(w, [&](const Field&) { return nw; }, dt));
    };
    auto stored = march(step, State(u0, w0), advance, [](const State& s) { return s; }).second;
    SystemTrajectory out;
    out.reserve(stored.size());
    for (auto& [t, s] : stored) out.push_back({t, std::move(s.first), std::move(s.second)});
    return out;
}

Trajectory nonlocal_scalar_solve(const Field& u0, const Reaction& F, double coupling,
                                 const Kernel& kernel, const StepControl& step)
{
    require_periodic(u0, "nonlocal scalar");
    if (!(kernel.grid == u0.grid())) throw ValidationError("nonlocal scalar: kernel grid differs");
    if (!F) throw ValidationError("nonlocal scalar: missing reaction function");
    const ThetaStepper su(diff2_matrix(u0.grid()), 0.5);
    const greenlink::Convolver conv(kernel);
    const bool fft = is_power_of_two(u0.size());
    auto rhs = [&](const Field& u) {
        const auto c = fft ? conv.apply(u.values())
                           : std::move(greenlink::convolve_direct(kernel, u)).release();
        std::vector<double> r(u.size());
        for (std::size_t j = 0; j < r.size(); ++j) r[j] = F(u[j]) - coupling * c[j];
        return r;
    };
    auto stored = march(step, u0, [&](const Field& u, double dt) { return su.step(u, rhs, dt); },
                        [](const Field& u) { return u; })
                      .second;
    Trajectory out;
    out.reserve(stored.size());
    for (auto& [t, u] : stored) out.push_back({t, std::move(u)});
    return out;
}

Trajectory nonlocal_scalar_solve(const Field& u0, const RDParams& p, const Kernel& kernel,
                                 const StepControl& step)
{
    p.validate();
    return nonlocal_scalar_solve(u0, p.F, p.sigma(), kernel, step);
}

std::pair<double, double> bistable_steady_state(const RDParams& p)
{
    const double r = 1.0 - p.sigma() / p.f;
    if (!(r > 0.0)) throw ValidationError("steady state: needs sigma < f");
    const double u = std::sqrt(r);
    return {u, p.h * u / p.f};
}

TauLimitReport tau_limit_report(const Field& u0, const std::optional<Field>& w0,
                                const RDParams& p, const std::vector<double>& tau_list,
                                const StepControl& step)
{
    p.validate();
    if (tau_list.empty()) throw ValidationError("tau limit: empty tau list");
    for (std::size_t i = 0; i < tau_list.size(); ++i) {
        if (!(tau_list[i] > 0.0)) throw ValidationError("tau limit: every tau must be positive");
        if (i > 0 && !(tau_list[i] < tau_list[i - 1]))
            throw ValidationError("tau limit: tau list must be strictly decreasing");
    }
    const Kernel green = inhibitor_green(p, u0.grid());
    const double coupling = p.sigma() / p.f;

    Field w_start = Field::zeros(u0.grid());
    if (w0) {
        require_same_grid(u0, *w0, "tau limit");
        w_start = *w0;
    } else {
        auto c = std::move(greenlink::convolve(green, u0)).release();
        for (double& x : c) x *= p.h / p.f;
        w_start = Field(u0.grid(), std::move(c));
    }

    // Index 0 is the scalar limit, the rest follow tau_list.
    auto finals = parallel_map(tau_list.size() + 1, [&](std::size_t i) {
        if (i == 0) return nonlocal_scalar_solve(u0, p.F, coupling, green, step).back().u;
        RDParams q = p;
        q.tau = tau_list[i - 1];
        return full_system_solve(u0, w_start, q, step).back().u;
    });

    TauLimitReport report{finals.front(), coupling, {}, true};
    for (std::size_t i = 0; i < tau_list.size(); ++i) {
        const double e = l2_distance(finals[i + 1], report.scalar_final);
        if (i > 0 && e > report.members.back().discrepancy) report.nonincreasing = false;
        report.members.push_back({tau_list[i], std::move(finals[i + 1]), e});
    }
    return report;
}

}  // namespace regulab::rdnonlocal
