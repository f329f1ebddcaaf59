#include "regulab/peridyn/peridyn.hpp"

#include "regulab/core/errors.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

namespace regulab::peridyn {

namespace {

using GL64 = boost::math::quadrature::gauss<double, 64>;

double ipow(double x, unsigned p)
{
    double r = 1.0;
    for (unsigned i = 0; i < p; ++i) r *= x;
    return r;
}

double factorial(unsigned k)
{
    double f = 1.0;
    for (unsigned i = 2; i <= k; ++i) f *= i;
    return f;
}

}  // namespace

void Micromodulus::validate() const
{
    if (!(delta > 0.0) || !std::isfinite(delta))
        throw ValidationError("micromodulus: horizon must be positive");
    if (!(lambda0 >= 0.0) || !std::isfinite(lambda0))
        throw ValidationError("micromodulus: lambda0 must be >= 0");
}

double Micromodulus::operator()(double r) const noexcept
{
    r = std::abs(r);
    if (r >= delta) return 0.0;
    return kind == Kind::Constant ? lambda0 : lambda0 * (1.0 - r / delta);
}

double Micromodulus::extended(double r) const noexcept
{
    r = std::abs(r);
    return kind == Kind::Constant ? lambda0 : lambda0 * std::max(0.0, 1.0 - r / delta);
}

double radial_moment(const Micromodulus& mu, unsigned p)
{
    mu.validate();
    const double d = ipow(mu.delta, p + 1);
    return mu.kind == Micromodulus::Kind::Constant ? mu.lambda0 * d / (p + 1)
                                     : mu.lambda0 * d / ((p + 1.0) * (p + 2.0));
}

double raw_moment(const Micromodulus& mu, unsigned p)
{
    return p % 2 == 1 ? 0.0 : 2.0 * radial_moment(mu, p);
}

double raw_moment_quadrature(const Micromodulus& mu, unsigned p)
{
    mu.validate();
    // The triangular profile has a kink at 0, so each half is integrated alone.
    auto f = [&](double h) { return mu(h) * ipow(h, p); };
    return GL64::integrate(f, -mu.delta, 0.0) + GL64::integrate(f, 0.0, mu.delta);
}

double moment(const Micromodulus& mu, unsigned order)
{
    if (order < 2 || order % 2 != 0) throw ValidationError("moment: order must be even and >= 2");
    return raw_moment(mu, order + 2);
}

namespace {

double nonlocal_at(const Field& u, const Micromodulus& mu, std::size_t j)
{
    const std::size_t n = u.size();
    const double dx = u.grid().dx();
    const auto reach = static_cast<std::ptrdiff_t>(std::ceil(mu.delta / dx + 0.5));
    const auto jj = static_cast<std::ptrdiff_t>(j);
    const std::ptrdiff_t first = std::max<std::ptrdiff_t>(0, jj - reach);
    const std::ptrdiff_t last = std::min<std::ptrdiff_t>(static_cast<std::ptrdiff_t>(n) - 1,
                                                         jj + reach);
    double s = 0.0;
    for (std::ptrdiff_t i = first; i <= last; ++i) {
        const std::ptrdiff_t off = i - jj;
        if (off == 0) continue;
        const double h = static_cast<double>(off) * dx;
        const double ah = std::abs(h);
        // Cell of node i, clipped to the domain (half cells at the ends).
        double lo = ah - 0.5 * dx, hi = ah + 0.5 * dx;
        // End nodes own half a cell; the missing half is the one facing away
        // from node j.
        if (i == 0 || i + 1 == static_cast<std::ptrdiff_t>(n)) hi = ah;
        hi = std::min(hi, mu.delta);
        const double w = hi - lo;
        if (w <= 0.0) continue;
        s += mu.extended(ah) * h * h * (u[static_cast<std::size_t>(i)] - u[j]) * w;
    }
    return s;
}

void check_resolution(const Field& u, const Micromodulus& mu)
{
    mu.validate();
    if (mu.delta < 2.0 * u.grid().dx())
        throw ValidationError("nonlocal operator: horizon " + std::to_string(mu.delta) +
                              " under-resolved, need delta >= 2 dx = " +
                              std::to_string(2.0 * u.grid().dx()));
    if (u.grid().periodic())
        throw ValidationError("nonlocal operator: needs a bounded (non-periodic) domain");
}

}  // namespace

std::vector<double> apply_nonlocal_at(const Field& u, const Micromodulus& mu,
                                      const std::vector<std::size_t>& nodes)
{
    check_resolution(u, mu);
    std::vector<double> out;
    out.reserve(nodes.size());
    for (std::size_t j : nodes) {
        if (j >= u.size()) throw ValidationError("nonlocal operator: node index out of range");
        out.push_back(nonlocal_at(u, mu, j));
    }
    return out;
}

Field apply_nonlocal_1d(const Field& u, const Micromodulus& mu)
{
    check_resolution(u, mu);
    std::vector<double> out(u.size());
    for (std::size_t j = 0; j < u.size(); ++j) out[j] = nonlocal_at(u, mu, j);
    return Field(Grid1D(u.grid().x_min(), u.grid().x_max(), u.size(), Boundary::Neumann0),
                 std::move(out));
}

double LocalSurrogate::coefficient(unsigned k) const
{
    for (const auto& [kk, c] : terms)
        if (kk == k) return c;
    return 0.0;
}

LocalSurrogate local_surrogate(const Micromodulus& mu, unsigned m)
{
    if (m < 2 || m % 2 != 0) throw ValidationError("local surrogate: m must be even and >= 2");
    LocalSurrogate s{m, {}};
    for (unsigned k = 2; k <= m; k += 2) s.terms.emplace_back(k, raw_moment(mu, k + 2) / factorial(k));
    return s;
}

double fitted_order(const std::vector<double>& x, const std::vector<double>& y)
{
    if (x.size() != y.size() || x.size() < 2)
        throw ValidationError("fitted order: need at least two points");
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

StudyReport convergence_study(const StudyConfig& cfg)
{
    if (cfg.deltas.empty()) throw ValidationError("convergence study: empty horizon list");
    for (std::size_t i = 1; i < cfg.deltas.size(); ++i)
        if (!(cfg.deltas[i] < cfg.deltas[i - 1]))
            throw ValidationError("convergence study: horizons must be strictly decreasing");
    if (cfg.surrogate_order != 2 && cfg.surrogate_order != 4)
        throw ValidationError("convergence study: surrogate order must be 2 or 4");
    if (!cfg.u.value || !cfg.u.d2 || (cfg.surrogate_order == 4 && !cfg.u.d4))
        throw ValidationError("convergence study: profile lacks required derivatives");
    if (!(cfg.x_max > cfg.x_min) || !(cfg.dx > 0.0))
        throw ValidationError("convergence study: bad domain");
    if (2.0 * cfg.deltas.front() >= cfg.x_max - cfg.x_min)
        throw ValidationError("convergence study: horizon too wide for the domain");
    if (cfg.sample_nodes < 2) throw ValidationError("convergence study: need >= 2 sample nodes");

    const auto n = static_cast<std::size_t>(std::llround((cfg.x_max - cfg.x_min) / cfg.dx)) + 1;
    const Grid1D grid(cfg.x_min, cfg.x_max, n, Boundary::Neumann0);
    const Field u = Field::sample(grid, cfg.u.value);
    const Micromodulus first{cfg.kind, cfg.lambda0, cfg.deltas.front()};
    const double c2_target = local_surrogate(first, 2).coefficient(2);

    // Evenly spread node indices over [a, b].
    auto spread = [&](double a, double b) {
        std::vector<std::size_t> idx;
        for (std::size_t k = 0; k < cfg.sample_nodes; ++k) {
            const double x = a + (b - a) * static_cast<double>(k) /
                                     static_cast<double>(cfg.sample_nodes - 1);
            idx.push_back(static_cast<std::size_t>(std::llround((x - cfg.x_min) / grid.dx())));
        }
        std::sort(idx.begin(), idx.end());
        idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
        return idx;
    };

    StudyReport report;
    std::vector<double> ds, es;
    for (double delta : cfg.deltas) {
        Micromodulus mu{cfg.kind, 1.0, delta};
        mu.lambda0 = cfg.normalization == Normalization::FixedC2
                         ? c2_target / local_surrogate(mu, 2).coefficient(2)
                         : cfg.lambda0;
        const auto surrogate = local_surrogate(mu, cfg.surrogate_order);
        auto local = [&](double x) {
            double v = surrogate.coefficient(2) * cfg.u.d2(x);
            if (cfg.surrogate_order == 4) v += surrogate.coefficient(4) * cfg.u.d4(x);
            return v;
        };
        auto max_error = [&](const std::vector<std::size_t>& nodes) {
            const auto lu = apply_nonlocal_at(u, mu, nodes);
            double e = 0.0;
            for (std::size_t k = 0; k < nodes.size(); ++k)
                e = std::max(e, std::abs(lu[k] - local(grid.x(nodes[k]))));
            return e;
        };
        // Interior: at least delta from both ends (one extra cell of margin).
        const double margin = delta + grid.dx();
        auto boundary = spread(cfg.x_min, cfg.x_min + delta);
        const auto right = spread(cfg.x_max - delta, cfg.x_max);
        boundary.insert(boundary.end(), right.begin(), right.end());
        StudyRow row{delta, mu.lambda0, max_error(spread(cfg.x_min + margin, cfg.x_max - margin)),
                     max_error(boundary)};
        report.rows.push_back(row);
        ds.push_back(delta);
        es.push_back(row.interior_error);
    }
    report.observed_order = ds.size() >= 2 ? fitted_order(ds, es) : 0.0;
    return report;
}

MomentTensor3 moment_tensor_3d(const Micromodulus& mu)
{
    mu.validate();
    const double radial = GL64::integrate([&](double r) { return mu(r) * ipow(r, 6); }, 0.0,
                                          mu.delta);

    // Angular rule: 16 Gauss-Legendre nodes in cos(theta), 32 equispaced in phi.
    using GL16 = boost::math::quadrature::gauss<double, 16>;
    std::vector<double> z, wz;
    {
        const auto& abscissa = GL16::abscissa();
        const auto& weights = GL16::weights();
        for (std::size_t i = 0; i < abscissa.size(); ++i) {
            z.push_back(abscissa[i]);
            wz.push_back(weights[i]);
            if (abscissa[i] != 0.0) {
                z.push_back(-abscissa[i]);
                wz.push_back(weights[i]);
            }
        }
    }
    constexpr int kPhi = 32;
    std::array<double, 81> ang{};
    for (std::size_t a = 0; a < z.size(); ++a) {
        const double st = std::sqrt(std::max(0.0, 1.0 - z[a] * z[a]));
        for (int b = 0; b < kPhi; ++b) {
            const double ph = 2.0 * std::numbers::pi * b / kPhi;
            const double w = wz[a] * 2.0 * std::numbers::pi / kPhi;
            const std::array<double, 3> nvec{st * std::cos(ph), st * std::sin(ph), z[a]};
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j)
                    for (int k = 0; k < 3; ++k)
                        for (int l = 0; l < 3; ++l)
                            ang[((i * 3 + j) * 3 + k) * 3 + l] +=
                                w * nvec[i] * nvec[j] * nvec[k] * nvec[l];
        }
    }

    MomentTensor3 m;
    for (std::size_t e = 0; e < 81; ++e) m.table[e] = 0.5 * radial * ang[e];
    m.xxxx = m.at(0, 0, 0, 0);
    m.xxyy = m.at(0, 0, 1, 1);
    m.xyxy = m.at(0, 1, 0, 1);

    auto iso = [](int i, int j, int k, int l) {
        return double(i == j && k == l) + double(i == k && j == l) + double(i == l && j == k);
    };
    double dot = 0.0, norm2 = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k)
                for (int l = 0; l < 3; ++l) {
                    dot += m.at(i, j, k, l) * iso(i, j, k, l);
                    norm2 += m.at(i, j, k, l) * m.at(i, j, k, l);
                }
    m.c = dot / 45.0;  // <T, T> = 45
    double dev = 0.0, sym = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k)
                for (int l = 0; l < 3; ++l) {
                    const double r = m.at(i, j, k, l) - m.c * iso(i, j, k, l);
                    dev += r * r;
                    std::array<int, 4> idx{i, j, k, l};
                    std::sort(idx.begin(), idx.end());
                    do {
                        sym = std::max(sym, std::abs(m.at(i, j, k, l) -
                                                     m.at(idx[0], idx[1], idx[2], idx[3])));
                    } while (std::next_permutation(idx.begin(), idx.end()));
                }
    const double norm = std::sqrt(norm2);
    m.isotropy_deviation = norm > 0.0 ? std::sqrt(dev) / norm : 0.0;
    m.symmetry_deviation = norm > 0.0 ? sym / norm : 0.0;
    // The isotropic form c (d_ij d_kl + d_ik d_jl + d_il d_jk) carries one
    // constant, so the Lame pair is (c, c) by construction.
    m.mu = m.c;
    m.lambda_lame = m.c;
    m.bulk = m.lambda_lame + 2.0 * m.mu / 3.0;
    return m;
}

}  // namespace regulab::peridyn
