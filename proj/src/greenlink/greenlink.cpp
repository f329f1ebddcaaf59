#include "regulab/greenlink/greenlink.hpp"

#include "regulab/core/errors.hpp"
#include "regulab/core/stencil.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace regulab::greenlink {

namespace {

void require_periodic(const Grid1D& grid, const char* who)
{
    if (!grid.periodic()) throw ValidationError(std::string(who) + ": grid must be Periodic");
}

Kernel finish(const Grid1D& grid, std::vector<double> values)
{
    Kernel k{grid, std::move(values), 0.0, 0.0};
    double s = 0.0;
    for (std::size_t j = 0; j < k.values.size(); ++j) {
        s += k.values[j];
        if (k.values[j] != 0.0)
            k.support_radius = std::max(k.support_radius, std::abs(signed_offset(grid, j)));
    }
    k.mass = s * grid.dx();
    return k;
}

}  // namespace

double signed_offset(const Grid1D& grid, std::size_t j) noexcept
{
    const auto n = grid.size();
    const auto i = j < n / 2 ? static_cast<double>(j)
                             : static_cast<double>(j) - static_cast<double>(n);
    return i * grid.dx();
}

KernelSampling resolve_sampling(double epsilon, const Grid1D& grid, KernelSampling sampling)
{
    if (sampling != KernelSampling::Auto) return sampling;
    return grid.dx() <= kKinkResolution * std::sqrt(epsilon) ? KernelSampling::KinkCorrected
                                                              : KernelSampling::CellAverage;
}

Kernel exp_kernel(double epsilon, const Grid1D& grid, KernelSampling sampling)
{
    if (!(epsilon > 0.0)) throw ValidationError("exp kernel: epsilon must be positive");
    require_periodic(grid, "exp kernel");
    const double a = std::sqrt(epsilon);
    const double required = 2.0 * a * std::log(1.0 / kWidthTolerance);
    if (!(std::exp(-grid.length() / (2.0 * a)) < kWidthTolerance))
        throw DomainTooSmallError("exp kernel: domain length " + std::to_string(grid.length()) +
                                      " too small, need at least " + std::to_string(required),
                                  required);

    const std::size_t n = grid.size();
    const double dx = grid.dx();
    const double h = 0.5 * dx;
    sampling = resolve_sampling(epsilon, grid, sampling);
    std::vector<double> v(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double r = std::abs(signed_offset(grid, j));
        if (sampling != KernelSampling::CellAverage) {
            v[j] = std::exp(-r / a) / (2.0 * a);
        } else if (j == 0) {
            v[j] = -std::expm1(-h / a) / dx;
        } else {
            v[j] = std::exp(-r / a) * std::sinh(h / a) / dx;
        }
    }
    if (sampling == KernelSampling::KinkCorrected) v[0] -= dx / (12.0 * epsilon);
    const double cutoff = 1e-14 * *std::max_element(v.begin(), v.end());
    for (double& x : v)
        if (std::abs(x) < cutoff) x = 0.0;
    return finish(grid, std::move(v));
}

void OperatorCoeffs::validate() const
{
    if (a.empty()) throw ValidationError("operator coefficients: need at least one a_k");
    for (double c : a)
        if (!(c > 0.0) || !std::isfinite(c))
            throw ValidationError("operator coefficients: every a_k must be positive");
}

double OperatorCoeffs::inverse_symbol(double w) const
{
    const double w2 = w * w;
    double s = 1.0, p = 1.0;
    for (double c : a) {
        p *= w2;
        s += c * p;
    }
    return 1.0 / s;
}

Kernel spectral_kernel(const OperatorCoeffs& coeffs, const Grid1D& grid)
{
    coeffs.validate();
    require_periodic(grid, "spectral kernel");
    const std::size_t n = grid.size();
    if (!is_power_of_two(n)) throw ValidationError("spectral kernel: n must be a power of two");
    std::vector<Complex> spectrum(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double w =
            2.0 * std::numbers::pi * static_cast<double>(signed_frequency(j, n)) / grid.length();
        spectrum[j] = coeffs.inverse_symbol(w);
    }
    auto v = idft_real(spectrum);
    for (double& x : v) x /= grid.dx();
    return finish(grid, std::move(v));
}

namespace {

void check_pair(const Kernel& k, const Field& u)
{
    require_periodic(u.grid(), "convolve");
    if (!(k.grid == u.grid())) throw ValidationError("convolve: kernel and field grids differ");
}

}  // namespace

Field convolve_direct(const Kernel& k, const Field& u)
{
    check_pair(k, u);
    const std::size_t n = u.size();
    std::vector<double> out(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j) s += k.values[(i + n - j) % n] * u[j];
        out[i] = s * u.grid().dx();
    }
    return Field(u.grid(), std::move(out));
}

Convolver::Convolver(const Kernel& k) : n_(k.values.size()), spectrum_(dft(k.values))
{
    for (auto& c : spectrum_) c *= k.grid.dx();
}

std::vector<double> Convolver::apply(std::span<const double> u) const
{
    if (u.size() != n_) throw ValidationError("convolve: size mismatch");
    auto f = dft(u);
    for (std::size_t j = 0; j < n_; ++j) f[j] *= spectrum_[j];
    const auto back = idft(f);
    std::vector<double> out(n_);
    for (std::size_t j = 0; j < n_; ++j) out[j] = back[j].real();
    return out;
}

Field convolve(const Kernel& k, const Field& u)
{
    check_pair(k, u);
    if (!is_power_of_two(u.size())) return convolve_direct(k, u);
    return Field(u.grid(), Convolver(k).apply(u.values()));
}

namespace {

template <class Accel>
WaveTrajectory verlet(const WaveState& s, const StepControl& step, Accel&& accel)
{
    if (!(s.u.grid() == s.v.grid())) throw ValidationError("wave solve: u and v grids differ");
    require_periodic(s.u.grid(), "wave solve");
    step.validate();
    const double ratio = step.dt / s.u.grid().dx();
    if (ratio > 1.0)
        throw CflError("wave solve: dt/dx = " + std::to_string(ratio) + " exceeds 1", ratio);

    struct State {
        std::vector<double> u, v, a;
    };
    const std::size_t n = s.u.size();
    State init{std::vector<double>(s.u.values().begin(), s.u.values().end()),
               std::vector<double>(s.v.values().begin(), s.v.values().end()), {}};
    init.a = accel(init.u);
    auto advance = [&](State x, double dt) {
        for (std::size_t j = 0; j < n; ++j) {
            x.v[j] += 0.5 * dt * x.a[j];
            x.u[j] += dt * x.v[j];
        }
        x.a = accel(x.u);
        for (std::size_t j = 0; j < n; ++j) x.v[j] += 0.5 * dt * x.a[j];
        return x;
    };
    const Grid1D& g = s.u.grid();
    auto observe = [&](const State& x) { return std::make_pair(Field(g, x.u), Field(g, x.v)); };
    auto stored = march(step, std::move(init), advance, observe).second;
    WaveTrajectory out;
    out.reserve(stored.size());
    for (auto& [t, uv] : stored) out.push_back({t, std::move(uv.first), std::move(uv.second)});
    return out;
}

}  // namespace

WaveTrajectory nonlocal_wave_solve(const WaveState& state, const Kernel& k,
                                   const StepControl& step)
{
    if (!(k.grid == state.u.grid())) throw ValidationError("nonlocal wave: kernel grid differs");
    const auto lap = diff2_matrix(state.u.grid());
    const Convolver conv(k);
    if (is_power_of_two(state.u.size()))
        return verlet(state, step, [&](const std::vector<double>& u) {
            return conv.apply(lap.apply(u));
        });
    return verlet(state, step, [&](const std::vector<double>& u) {
        const Field d(state.u.grid(), lap.apply(u));
        return std::move(convolve_direct(k, d)).release();
    });
}

WaveTrajectory regularized_wave_solve(const WaveState& state, double epsilon,
                                      const StepControl& step)
{
    if (!(epsilon >= 0.0)) throw ValidationError("regularized wave: epsilon must be >= 0");
    const auto lap = diff2_matrix(state.u.grid());
    const BandedLU mass(lap.affine(1.0, -epsilon));
    return verlet(state, step, [&](const std::vector<double>& u) {
        auto a = lap.apply(u);
        mass.solve_in_place(a);
        return a;
    });
}

double wave_energy(const Field& u, const Field& v)
{
    require_same_grid(u, v, "wave energy");
    const std::size_t n = u.size();
    const std::size_t cells = u.grid().cell_count();
    const double dx = u.grid().dx();
    double e = 0.0;
    for (std::size_t j = 0; j < n; ++j) e += v[j] * v[j];
    for (std::size_t j = 0; j < cells; ++j) {
        const double g = (u[(j + 1) % n] - u[j]) / dx;
        e += g * g;
    }
    return 0.5 * e * dx;
}

double verlet_wave_energy(const Field& u, const Field& v, double dt)
{
    const Field d = diff2(u);
    double s = 0.0;
    for (double x : d.values()) s += x * x;
    return wave_energy(u, v) - dt * dt / 8.0 * s * u.grid().dx();
}

double oscillation_frequency(std::span<const double> t, std::span<const double> y)
{
    if (t.size() != y.size()) throw ValidationError("oscillation frequency: size mismatch");
    std::vector<double> crossings;
    for (std::size_t k = 1; k < y.size(); ++k) {
        if ((y[k - 1] < 0.0) != (y[k] < 0.0)) {
            const double s = y[k - 1] / (y[k - 1] - y[k]);
            crossings.push_back(t[k - 1] + s * (t[k] - t[k - 1]));
        }
    }
    if (crossings.size() < 2)
        throw ValidationError("oscillation frequency: need at least two zero crossings");
    const double half_period =
        (crossings.back() - crossings.front()) / static_cast<double>(crossings.size() - 1);
    return std::numbers::pi / half_period;
}

double dispersion(double k, double epsilon) noexcept
{
    return std::abs(k) / std::sqrt(1.0 + epsilon * k * k);
}

namespace {

double max_gap(const WaveTrajectory& a, const WaveTrajectory& b)
{
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        d = std::max(d, max_abs_diff(a[i].u.values(), b[i].u.values()));
    return d;
}

Field every_other(const Grid1D& coarse, const Field& f)
{
    std::vector<double> v(coarse.size());
    for (std::size_t j = 0; j < v.size(); ++j) v[j] = f[2 * j];
    return Field(coarse, std::move(v));
}

}  // namespace

EquivalenceReport equivalence_report(const Field& u0, const Field& v0, double epsilon,
                                     const StepControl& step, double factor,
                                     KernelSampling requested)
{
    const Grid1D& fine = u0.grid();
    require_periodic(fine, "equivalence report");
    if (fine.size() % 2 != 0 || fine.size() < 8)
        throw ValidationError("equivalence report: need an even node count >= 8");
    const Grid1D coarse(fine.x_min(), fine.x_max(), fine.size() / 2, Boundary::Periodic);

    const KernelSampling sampling = resolve_sampling(epsilon, fine, requested);
    auto gap = [&](const Field& u, const Field& v, double* deficit) {
        const Kernel k = exp_kernel(epsilon, u.grid(), sampling);
        if (deficit) *deficit = std::abs(k.deficit());
        const WaveState s{u, v};
        return max_gap(nonlocal_wave_solve(s, k, step), regularized_wave_solve(s, epsilon, step));
    };

    EquivalenceReport r{};
    r.epsilon = epsilon;
    r.dx = fine.dx();
    r.sampling = sampling;
    r.difference = gap(u0, v0, &r.kernel_deficit);
    r.coarse_difference = gap(every_other(coarse, u0), every_other(coarse, v0), nullptr);
    r.observed_order = r.difference > 0.0 && r.coarse_difference > 0.0
                           ? std::log2(r.coarse_difference / r.difference)
                           : 0.0;
    r.tolerance = factor * (r.dx * r.dx + r.kernel_deficit);
    r.pass = r.difference <= r.tolerance;
    return r;
}

}  // namespace regulab::greenlink
