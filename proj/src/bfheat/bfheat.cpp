#include "regulab/bfheat/bfheat.hpp"

#include "regulab/core/errors.hpp"
#include "regulab/core/parallel.hpp"
#include "regulab/core/stencil.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace regulab::bfheat {

FluxFunction FluxFunction::linear(double a)
{
    if (!(a > 0.0)) throw ValidationError("linear flux: slope a must be positive");
    FluxFunction f;
    f.kind_ = Kind::Linear;
    f.a_ = a;
    return f;
}

FluxFunction FluxFunction::cubic()
{
    FluxFunction f;
    f.kind_ = Kind::Cubic;
    return f;
}

FluxFunction FluxFunction::piecewise_linear(std::vector<double> breakpoints,
                                            std::vector<double> slopes)
{
    if (slopes.size() != breakpoints.size() + 1)
        throw ValidationError("piecewise-linear flux: need one more slope than breakpoints");
    for (std::size_t i = 1; i < breakpoints.size(); ++i)
        if (!(breakpoints[i] > breakpoints[i - 1]))
            throw ValidationError("piecewise-linear flux: breakpoints must increase");
    for (double s : slopes)
        if (!std::isfinite(s)) throw ValidationError("piecewise-linear flux: slopes must be finite");
    FluxFunction f;
    f.kind_ = Kind::PiecewiseLinear;
    f.breaks_ = std::move(breakpoints);
    f.slopes_ = std::move(slopes);
    return f;
}

double FluxFunction::slope(double p) const
{
    switch (kind_) {
    case Kind::Linear: return a_;
    case Kind::Cubic: return 3.0 * p * p - 1.0;
    case Kind::PiecewiseLinear: {
        const auto it = std::upper_bound(breaks_.begin(), breaks_.end(), p);
        return slopes_[static_cast<std::size_t>(it - breaks_.begin())];
    }
    }
    return 0.0;
}

namespace {

// Breakpoints strictly between 0 and p, ordered from 0 towards p, then p itself.
std::vector<double> path_from_origin(const std::vector<double>& breaks, double p)
{
    std::vector<double> pts;
    if (p >= 0.0) {
        for (double b : breaks)
            if (b > 0.0 && b < p) pts.push_back(b);
    } else {
        for (auto it = breaks.rbegin(); it != breaks.rend(); ++it)
            if (*it < 0.0 && *it > p) pts.push_back(*it);
    }
    pts.push_back(p);
    return pts;
}

}  // namespace

double FluxFunction::value(double p) const
{
    switch (kind_) {
    case Kind::Linear: return a_ * p;
    case Kind::Cubic: return p * p * p - p;
    case Kind::PiecewiseLinear: {
        double v = 0.0, q = 0.0;
        for (double next : path_from_origin(breaks_, p)) {
            v += slope(0.5 * (q + next)) * (next - q);
            q = next;
        }
        return v;
    }
    }
    return 0.0;
}

double FluxFunction::energy(double p) const
{
    switch (kind_) {
    case Kind::Linear: return 0.5 * a_ * p * p;
    case Kind::Cubic: return 0.25 * p * p * p * p - 0.5 * p * p;
    case Kind::PiecewiseLinear: {
        // phi is linear on each piece, so the trapezoid rule is exact.
        double w = 0.0, q = 0.0, fq = 0.0;
        for (double next : path_from_origin(breaks_, p)) {
            const double fn = fq + slope(0.5 * (q + next)) * (next - q);
            w += 0.5 * (fq + fn) * (next - q);
            q = next;
            fq = fn;
        }
        return w;
    }
    }
    return 0.0;
}

double FluxFunction::max_abs_slope(double lo, double hi) const
{
    switch (kind_) {
    case Kind::Linear: return std::abs(a_);
    case Kind::Cubic: {
        double m = std::max(std::abs(slope(lo)), std::abs(slope(hi)));
        if (lo <= 0.0 && hi >= 0.0) m = std::max(m, 1.0);
        return m;
    }
    case Kind::PiecewiseLinear: {
        double m = std::max(std::abs(slope(lo)), std::abs(slope(hi)));
        for (std::size_t i = 0; i < breaks_.size(); ++i)
            if (breaks_[i] > lo && breaks_[i] < hi)
                m = std::max({m, std::abs(slopes_[i]), std::abs(slopes_[i + 1])});
        return m;
    }
    }
    return 0.0;
}

std::vector<double> cell_gradients(const Field& u)
{
    const std::size_t n = u.size();
    const std::size_t cells = u.grid().cell_count();
    const double inv_dx = 1.0 / u.grid().dx();
    std::vector<double> p(cells);
    for (std::size_t j = 0; j < cells; ++j) p[j] = (u[(j + 1) % n] - u[j]) * inv_dx;
    return p;
}

namespace {

void require_supported_grid(const Grid1D& grid, const char* who)
{
    if (grid.bc() == Boundary::Neumann0)
        throw ValidationError(std::string(who) + ": grid must be Periodic or Dirichlet0");
}

void require_epsilon(double epsilon, const char* who)
{
    if (!(epsilon > 0.0)) throw ValidationError(std::string(who) + ": epsilon must be positive");
}

}  // namespace

std::vector<double> flux_divergence(const Field& u, const FluxFunction& phi)
{
    const std::size_t n = u.size();
    const auto p = cell_gradients(u);
    std::vector<double> q(p.size());
    for (std::size_t j = 0; j < p.size(); ++j) q[j] = phi.value(p[j]);
    const double inv_dx = 1.0 / u.grid().dx();
    std::vector<double> out(n, 0.0);
    if (u.grid().periodic()) {
        for (std::size_t j = 0; j < n; ++j) out[j] = (q[j] - q[(j + n - 1) % n]) * inv_dx;
    } else {
        for (std::size_t j = 1; j + 1 < n; ++j) out[j] = (q[j] - q[j - 1]) * inv_dx;
    }
    if (u.grid().bc() == Boundary::Neumann0) {
        // Zero flux through the walls.
        out.front() = q.front() * inv_dx;
        out.back() = -q.back() * inv_dx;
    }
    return out;
}

double explicit_dt_limit(const Field& u, const FluxFunction& phi)
{
    const auto p = cell_gradients(u);
    const auto [lo, hi] = std::minmax_element(p.begin(), p.end());
    const double s = phi.max_abs_slope(*lo, *hi);
    const double dx = u.grid().dx();
    return s > 0.0 ? dx * dx / (2.0 * s) : INFINITY;
}

BiharmonicStepper::BiharmonicStepper(const Grid1D& grid, FluxFunction phi, double epsilon)
    : phi_(std::move(phi)), epsilon_(epsilon),
      implicit_((require_supported_grid(grid, "biharmonic step"),
                 require_epsilon(epsilon, "biharmonic step"),
                 diff4_matrix(grid).affine(0.0, -epsilon)),
                1.0)
{
}

Field BiharmonicStepper::step(const Field& u, double dt) const
{
    const double limit = explicit_dt_limit(u, phi_);
    if (dt > limit)
        throw StabilityError("biharmonic step: dt " + std::to_string(dt) +
                                 " exceeds explicit flux limit " + std::to_string(limit),
                             dt, limit);
    const auto div = flux_divergence(u, phi_);
    return implicit_.step(u, [&](const Field&) { return div; }, dt);
}

PseudoparabolicStepper::PseudoparabolicStepper(const Grid1D& grid, FluxFunction phi,
                                               double epsilon)
    : phi_(std::move(phi)), epsilon_(epsilon),
      implicit_((require_epsilon(epsilon, "pseudoparabolic step"), diff2_matrix(grid)), 1.0)
{
}

Field PseudoparabolicStepper::step(const Field& u, double dt) const
{
    // ThetaStepper with theta = 1 solves (I - h diff2) x = b; with h = eps
    // this is exactly the regularizing operator.
    auto rhs = flux_divergence(u, phi_);
    for (double& r : rhs) r *= dt;
    if (u.grid().bc() == Boundary::Dirichlet0) rhs.front() = rhs.back() = 0.0;
    auto inc = implicit_.solve(std::move(rhs), epsilon_);
    std::vector<double> next(u.size());
    for (std::size_t j = 0; j < next.size(); ++j) next[j] = u[j] + inc[j];
    if (u.grid().bc() == Boundary::Dirichlet0) next.front() = next.back() = 0.0;
    return Field(u.grid(), std::move(next));
}

Field step_biharmonic(const Field& u, const FluxFunction& phi, double epsilon, double dt)
{
    return BiharmonicStepper(u.grid(), phi, epsilon).step(u, dt);
}

Field step_pseudoparabolic(const Field& u, const FluxFunction& phi, double epsilon, double dt)
{
    return PseudoparabolicStepper(u.grid(), phi, epsilon).step(u, dt);
}

double energy(const Field& u, const FluxFunction& phi, double curvature_weight)
{
    const double dx = u.grid().dx();
    double e = 0.0;
    for (double p : cell_gradients(u)) e += phi.energy(p);
    e *= dx;
    if (curvature_weight != 0.0) {
        const Field c = diff2(u);
        double s = 0.0;
        for (double v : c.values()) s += v * v;
        e += 0.5 * curvature_weight * s * dx;
    }
    return e;
}

GradientHistogram young_histogram(const Field& u, std::size_t bins,
                                  std::optional<std::pair<double, double>> range)
{
    if (bins < 8) throw ValidationError("young histogram: need at least 8 bins");
    const auto p = cell_gradients(u);
    auto [mn, mx] = std::minmax_element(p.begin(), p.end());
    double lo = *mn, hi = *mx;
    if (range) {
        lo = std::min(lo, range->first);
        hi = std::max(hi, range->second);
    }
    if (!(hi > lo)) {
        const double pad = 0.5 * std::max(1.0, std::abs(lo));
        lo -= pad;
        hi += pad;
    }
    GradientHistogram h;
    h.edges.resize(bins + 1);
    const double w = (hi - lo) / static_cast<double>(bins);
    for (std::size_t i = 0; i <= bins; ++i) h.edges[i] = lo + static_cast<double>(i) * w;
    h.edges.back() = hi;
    h.counts.assign(bins, 0);
    for (double g : p) {
        auto i = static_cast<std::size_t>(std::max(0.0, std::floor((g - lo) / w)));
        ++h.counts[std::min(i, bins - 1)];
    }
    h.total = p.size();
    return h;
}

Bimodality bimodality(const GradientHistogram& h)
{
    Bimodality b;
    std::optional<std::size_t> left, right;
    for (std::size_t i = 0; i < h.bins(); ++i) {
        const double c = h.center(i);
        if (c < 0.0 && (!left || h.counts[i] > h.counts[*left])) left = i;
        if (c > 0.0 && (!right || h.counts[i] > h.counts[*right])) right = i;
    }
    if (!left || !right || h.counts[*left] == 0 || h.counts[*right] == 0) return b;
    b.has_two_peaks = true;
    b.negative_peak = h.center(*left);
    b.positive_peak = h.center(*right);
    std::size_t saddle = h.counts[*left];
    for (std::size_t i = *left; i <= *right; ++i) saddle = std::min(saddle, h.counts[i]);
    b.index = static_cast<double>(saddle) /
              static_cast<double>(std::min(h.counts[*left], h.counts[*right]));
    return b;
}

RegularizedRun run(Regularization kind, const Field& u0, const FluxFunction& phi, double epsilon,
                   const StepControl& step, std::size_t bins)
{
    const double weight = kind == Regularization::Biharmonic ? epsilon : 0.0;
    auto observe = [&](const Field& u) { return energy(u, phi, weight); };
    std::pair<Field, std::vector<std::pair<double, double>>> out{u0, {}};
    if (kind == Regularization::Biharmonic) {
        const BiharmonicStepper s(u0.grid(), phi, epsilon);
        out = march(step, u0, [&](const Field& u, double dt) { return s.step(u, dt); }, observe);
    } else {
        const PseudoparabolicStepper s(u0.grid(), phi, epsilon);
        out = march(step, u0, [&](const Field& u, double dt) { return s.step(u, dt); }, observe);
    }
    double inc = -INFINITY;
    for (std::size_t k = 1; k < out.second.size(); ++k)
        inc = std::max(inc, out.second[k].second - out.second[k - 1].second);
    GradientHistogram h = young_histogram(out.first, bins);
    return {std::move(out.first), std::move(h), std::move(out.second), inc};
}

ComparisonReport regularisation_comparison(const Field& u0, const FluxFunction& phi,
                                           const std::vector<double>& eps_list,
                                           const StepControl& step, std::size_t bins)
{
    if (eps_list.empty()) throw ValidationError("regularisation comparison: empty epsilon list");
    for (double e : eps_list) require_epsilon(e, "regularisation comparison");
    step.validate();
    auto runs = parallel_map(2 * eps_list.size(), [&](std::size_t i) {
        const auto kind = i % 2 == 0 ? Regularization::Biharmonic : Regularization::Pseudoparabolic;
        return run(kind, u0, phi, eps_list[i / 2], step, bins);
    });
    ComparisonReport report;
    for (std::size_t i = 0; i < eps_list.size(); ++i) {
        const double d = l2_distance(runs[2 * i].u_final, runs[2 * i + 1].u_final);
        report.members.push_back(
            {eps_list[i], std::move(runs[2 * i]), std::move(runs[2 * i + 1]), d});
    }
    return report;
}

}  // namespace regulab::bfheat
