#include "regulab/noise/noise.hpp"

#include "regulab/core/errors.hpp"
#include "regulab/core/parallel.hpp"
#include "regulab/core/stencil.hpp"

#include <algorithm>
#include <cmath>

namespace regulab::noise {

namespace {

// Samples are grouped into fixed blocks so the merge order, and therefore the
// rounding, does not depend on the thread count.
constexpr std::size_t kBlock = 64;

std::size_t block_count(std::size_t n) { return (n + kBlock - 1) / kBlock; }

}  // namespace

std::uint64_t splitmix64(std::uint64_t x) noexcept
{
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

SeededRng::SeededRng(std::uint64_t base_seed, std::uint64_t stream)
    : seed_(base_seed), stream_(stream), engine_(splitmix64(base_seed ^ stream))
{
}

double SeededRng::normal() { return gauss_(engine_); }

void Welford::add(std::span<const double> x)
{
    if (count_ == 0 && mean_.empty()) {
        mean_.assign(x.size(), 0.0);
        m2_.assign(x.size(), 0.0);
    }
    if (x.size() != mean_.size()) throw ValidationError("welford: size mismatch");
    ++count_;
    const double n = static_cast<double>(count_);
    for (std::size_t j = 0; j < x.size(); ++j) {
        const double d = x[j] - mean_[j];
        mean_[j] += d / n;
        m2_[j] += d * (x[j] - mean_[j]);
    }
}

void Welford::merge(const Welford& other)
{
    if (other.count_ == 0) return;
    if (count_ == 0) {
        *this = other;
        return;
    }
    if (other.mean_.size() != mean_.size()) throw ValidationError("welford: size mismatch");
    const double na = static_cast<double>(count_);
    const double nb = static_cast<double>(other.count_);
    const double n = na + nb;
    for (std::size_t j = 0; j < mean_.size(); ++j) {
        const double d = other.mean_[j] - mean_[j];
        mean_[j] += d * nb / n;
        m2_[j] += other.m2_[j] + d * d * na * nb / n;
    }
    count_ += other.count_;
}

std::vector<double> Welford::variance() const
{
    std::vector<double> v(mean_.size(), 0.0);
    if (count_ < 2) return v;
    for (std::size_t j = 0; j < v.size(); ++j) v[j] = m2_[j] / static_cast<double>(count_ - 1);
    return v;
}

std::vector<double> EnsembleStats::standard_error() const
{
    std::vector<double> se(variance.size());
    for (std::size_t j = 0; j < se.size(); ++j)
        se[j] = std::sqrt(variance[j] / static_cast<double>(n_samples));
    return se;
}

namespace {

void validate_heat(const HeatConfig& c)
{
    if (c.u0.grid().bc() != Boundary::Dirichlet0)
        throw ValidationError("stochastic heat: grid must be Dirichlet0");
    if (!std::isfinite(c.noise_amp) || c.noise_amp < 0.0)
        throw ValidationError("stochastic heat: noise amplitude must be finite and >= 0");
    c.step.validate();
    if (c.step.dt > 1e-2 * c.step.t_end * (1.0 + 1e-12))
        throw ValidationError("stochastic heat: dt must be at most 1e-2 * t_end");
}

Trajectory heat_path_with(const HeatConfig& c, const ThetaStepper& stepper, SeededRng& rng)
{
    const Grid1D& grid = c.u0.grid();
    const std::size_t n = grid.size();
    const double dx = grid.dx();
    std::vector<double> x = grid.nodes();
    std::vector<double> rhs(n);

    auto step = [&](const Field& u, double dt) {
        stepper.explicit_part(u.values(), dt, rhs);
        const double scale = c.noise_amp * std::sqrt(dt / dx);
        for (std::size_t j = 1; j + 1 < n; ++j) {
            if (c.f) rhs[j] += dt * c.f(x[j], u[j]);
            if (scale > 0.0) rhs[j] += scale * rng.normal();
        }
        rhs.front() = 0.0;
        rhs.back() = 0.0;
        std::vector<double> next = stepper.solve(rhs, dt);
        next.front() = next.back() = 0.0;
        return Field(grid, std::move(next));
    };
    auto [final_state, stored] = march(c.step, c.u0, step, [](const Field& u) { return u; });
    Trajectory out;
    out.reserve(stored.size());
    for (auto& [t, u] : stored) out.push_back({t, std::move(u)});
    return out;
}

}  // namespace

Trajectory spde_heat_path(const HeatConfig& config, SeededRng& rng)
{
    validate_heat(config);
    const ThetaStepper stepper(diff2_matrix(config.u0.grid()), 0.5);
    return heat_path_with(config, stepper, rng);
}

EnsembleStats heat_ensemble(std::size_t n_samples, const HeatConfig& config,
                            std::uint64_t base_seed)
{
    validate_heat(config);
    if (n_samples < 2) throw ValidationError("heat ensemble: need at least 2 samples");
    HeatConfig final_only = config;
    final_only.step.store_every = config.step.total_steps() + 1;

    auto blocks = parallel_map(block_count(n_samples), [&](std::size_t b) {
        const ThetaStepper stepper(diff2_matrix(config.u0.grid()), 0.5);
        Welford acc;
        const std::size_t end = std::min(n_samples, (b + 1) * kBlock);
        for (std::size_t i = b * kBlock; i < end; ++i) {
            SeededRng rng(base_seed, i);
            const Trajectory path = heat_path_with(final_only, stepper, rng);
            acc.add(path.back().u.values());
        }
        return acc;
    });
    Welford total;
    for (const auto& b : blocks) total.merge(b);
    const Grid1D& grid = config.u0.grid();
    return {Field(grid, total.mean()), Field(grid, total.variance()), total.count()};
}

DriftField DriftField::constant(double c)
{
    if (!std::isfinite(c)) throw ValidationError("drift: constant must be finite");
    DriftField b;
    b.kind = Kind::Constant;
    b.c = c;
    return b;
}

DriftField DriftField::from(std::function<double(double)> f)
{
    if (!f) throw ValidationError("drift: empty function");
    DriftField b;
    b.kind = Kind::Smooth;
    b.smooth = std::move(f);
    return b;
}

DriftField DriftField::square_root()
{
    DriftField b;
    b.kind = Kind::SquareRoot;
    return b;
}

double DriftField::operator()(double x) const
{
    switch (kind) {
    case Kind::Constant: return c;
    case Kind::Smooth: return smooth(x);
    case Kind::SquareRoot: return std::copysign(std::sqrt(std::abs(x)), x);
    }
    return 0.0;
}

namespace {

// Per-node running mean and m2 over the samples of one block that stayed in
// the guard interval.
struct TransportBlock {
    std::vector<double> mean, m2;
    std::vector<std::size_t> used;
    std::size_t escapes = 0;
};

}  // namespace

TransportEstimate stochastic_transport_mean(const Grid1D& grid, const TransportConfig& config,
                                            std::uint64_t base_seed)
{
    if (!config.u0) throw ValidationError("transport: empty initial datum");
    if (!(config.t > 0.0) || !(config.dt > 0.0) || config.dt > config.t)
        throw ValidationError("transport: need 0 < dt <= t");
    if (config.n_samples < 2) throw ValidationError("transport: need at least 2 samples");

    const std::size_t n = grid.size();
    const std::vector<double> x0 = grid.nodes();
    const double lo = grid.x_min() - grid.length();
    const double hi = grid.x_max() + grid.length();
    const std::size_t steps = static_cast<std::size_t>(std::ceil(config.t / config.dt - 1e-9));
    const double ds = config.t / static_cast<double>(steps);
    const double sqrt_ds = std::sqrt(ds);
    const DriftField& b = config.b;

    auto blocks = parallel_map(block_count(config.n_samples), [&](std::size_t blk) {
        TransportBlock out{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0),
                           std::vector<std::size_t>(n, 0), 0};
        std::vector<double> x(n), value(n);
        std::vector<char> alive(n);
        const std::size_t end = std::min(config.n_samples, (blk + 1) * kBlock);
        for (std::size_t i = blk * kBlock; i < end; ++i) {
            SeededRng rng(base_seed, i);
            x = x0;
            std::fill(alive.begin(), alive.end(), 1);
            for (std::size_t k = 0; k < steps; ++k) {
                const double dw = sqrt_ds * rng.normal();
                for (std::size_t j = 0; j < n; ++j) {
                    if (!alive[j]) continue;
                    const double drift = b(x[j]);
                    double next = x[j] - drift * ds + dw;
                    if (config.heun) next = x[j] - 0.5 * (drift + b(next)) * ds + dw;
                    x[j] = next;
                    if (!(x[j] >= lo && x[j] <= hi)) alive[j] = 0;
                }
            }
            for (std::size_t j = 0; j < n; ++j) {
                if (!alive[j]) {
                    ++out.escapes;
                    continue;
                }
                const double v = config.u0(x[j]);
                const double cnt = static_cast<double>(++out.used[j]);
                const double d = v - out.mean[j];
                out.mean[j] += d / cnt;
                out.m2[j] += d * (v - out.mean[j]);
            }
        }
        return out;
    });

    std::vector<double> mean(n, 0.0), m2(n, 0.0);
    std::vector<std::size_t> used(n, 0);
    std::size_t escapes = 0;
    for (const auto& blk : blocks) {
        escapes += blk.escapes;
        for (std::size_t j = 0; j < n; ++j) {
            const std::size_t nb = blk.used[j];
            if (nb == 0) continue;
            const double na = static_cast<double>(used[j]);
            const double nbd = static_cast<double>(nb);
            const double tot = na + nbd;
            const double d = blk.mean[j] - mean[j];
            mean[j] += d * nbd / tot;
            m2[j] += blk.m2[j] + d * d * na * nbd / tot;
            used[j] += nb;
        }
    }

    TransportEstimate est{Field(grid, mean), std::vector<double>(n, 0.0), used, escapes};
    for (std::size_t j = 0; j < n; ++j)
        if (used[j] > 1) {
            const double cnt = static_cast<double>(used[j]);
            est.standard_error[j] = std::sqrt(m2[j] / (cnt - 1.0) / cnt);
        }
    return est;
}

double sample_std(std::span<const double> x)
{
    if (x.size() < 2) return 0.0;
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= static_cast<double>(x.size());
    double s = 0.0;
    for (double v : x) s += (v - mean) * (v - mean);
    return std::sqrt(s / static_cast<double>(x.size() - 1));
}

std::vector<double> forward_endpoints(const DriftField& b, double noise_amp, std::size_t paths,
                                      double half_width, double t, double dt,
                                      std::uint64_t base_seed)
{
    if (paths < 1) throw ValidationError("coalescence: need at least one path");
    if (!(half_width >= 0.0) || !(t > 0.0) || !(dt > 0.0) || dt > t)
        throw ValidationError("coalescence: need half_width >= 0 and 0 < dt <= t");
    if (!std::isfinite(noise_amp) || noise_amp < 0.0)
        throw ValidationError("coalescence: noise amplitude must be finite and >= 0");
    const std::size_t steps = static_cast<std::size_t>(std::ceil(t / dt - 1e-9));
    const double ds = t / static_cast<double>(steps);
    const double sqrt_ds = std::sqrt(ds);

    std::vector<double> end(paths);
    for (std::size_t i = 0; i < paths; ++i) {
        double x = paths == 1 ? 0.0
                              : -half_width + 2.0 * half_width * static_cast<double>(i) /
                                                  static_cast<double>(paths - 1);
        SeededRng rng(base_seed, i);
        for (std::size_t k = 0; k < steps; ++k) {
            const double dw = noise_amp > 0.0 ? noise_amp * sqrt_ds * rng.normal() : 0.0;
            x += b(x) * ds + dw;
        }
        end[i] = x;
    }
    return end;
}

CoalescenceReport coalescence_diagnostic(const DriftField& b, std::size_t paths,
                                         double half_width, double t, double dt,
                                         std::uint64_t base_seed)
{
    CoalescenceReport r;
    r.endpoints_without_noise = forward_endpoints(b, 0.0, paths, half_width, t, dt, base_seed);
    r.endpoints_with_noise = forward_endpoints(b, 1.0, paths, half_width, t, dt, base_seed);
    r.spread_without_noise = sample_std(r.endpoints_without_noise);
    r.spread_with_noise = sample_std(r.endpoints_with_noise);
    return r;
}

}  // namespace regulab::noise
