#pragma once

#include "regulab/core/field.hpp"
#include "regulab/core/time_stepping.hpp"

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <vector>

namespace regulab::noise {

std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Per-sample random stream. Stream i of base seed s is seeded with
/// splitmix64(s ^ i), so a sample's path never depends on which thread runs it.
class SeededRng {
public:
    SeededRng(std::uint64_t base_seed, std::uint64_t stream);

    std::uint64_t seed() const noexcept { return seed_; }
    std::uint64_t stream() const noexcept { return stream_; }
    double normal();

private:
    std::uint64_t seed_;
    std::uint64_t stream_;
    std::mt19937_64 engine_;
    std::normal_distribution<double> gauss_;
};

/// One-pass per-node mean and variance (Welford).
class Welford {
public:
    explicit Welford(std::size_t n = 0) : mean_(n, 0.0), m2_(n, 0.0) {}
    void add(std::span<const double> x);
    /// Chan et al. pairwise combination; merging in a fixed order keeps the
    /// result independent of how samples were split.
    void merge(const Welford& other);
    std::size_t count() const noexcept { return count_; }
    const std::vector<double>& mean() const noexcept { return mean_; }
    std::vector<double> variance() const;

private:
    std::size_t count_ = 0;
    std::vector<double> mean_;
    std::vector<double> m2_;
};

struct EnsembleStats {
    Field mean;
    Field variance;  // unbiased
    std::size_t n_samples;

    /// sqrt(variance / n) at each node.
    std::vector<double> standard_error() const;
};

/// f(x, u), applied explicitly.
using Forcing = std::function<double(double, double)>;

struct HeatConfig {
    Field u0;
    Forcing f;            // empty means 0
    double noise_amp = 1.0;
    StepControl step;
};

/// Crank-Nicolson Euler-Maruyama for u_t = u_xx + f + amp * white noise on a
/// Dirichlet0 grid:
///   (I - dt/2 diff2) u+ = (I + dt/2 diff2) u + dt f(x, u) + amp sqrt(dt/dx) xi
/// with xi standard normal on interior nodes. Requires dt <= 1e-2 t_end.
Trajectory spde_heat_path(const HeatConfig& config, SeededRng& rng);

/// Final-time statistics over n_samples paths, sample i using stream i.
/// Samples are accumulated in fixed blocks merged in index order.
EnsembleStats heat_ensemble(std::size_t n_samples, const HeatConfig& config,
                            std::uint64_t base_seed);

/// Drift b(x) of the transport equation.
struct DriftField {
    enum class Kind { Constant, Smooth, SquareRoot };
    Kind kind = Kind::Constant;
    double c = 0.0;
    std::function<double(double)> smooth;

    static DriftField constant(double c);
    static DriftField from(std::function<double(double)> b);
    static DriftField square_root();  // sign(x) sqrt|x|

    double operator()(double x) const;
    bool lipschitz() const noexcept { return kind != Kind::SquareRoot; }
};

struct TransportConfig {
    std::function<double(double)> u0;
    DriftField b;
    double t = 1.0;
    double dt = 1e-2;
    std::size_t n_samples = 10000;
    bool heun = false;  // predictor-corrector in the drift
};

struct TransportEstimate {
    Field mean;
    std::vector<double> standard_error;
    std::vector<std::size_t> used;  // samples per node that stayed in the guard interval
    std::size_t escapes = 0;
};

/// E[u(x, t)] by backward characteristics dX = -b(X) ds + dW from X(0) = x,
/// u(x, t) = u0(X(t)). Sample i draws one Brownian path shared by every node.
/// Paths leaving [x_min - L, x_max + L] are counted and excluded.
TransportEstimate stochastic_transport_mean(const Grid1D& grid, const TransportConfig& config,
                                            std::uint64_t base_seed);

struct CoalescenceReport {
    double spread_without_noise;
    double spread_with_noise;
    std::vector<double> endpoints_without_noise;
    std::vector<double> endpoints_with_noise;
};

/// Forward paths dX = b(X) ds + amp dW from starts spread over
/// [-half_width, half_width], each with its own noise stream; spread is the
/// sample standard deviation of the endpoints. Qualitative only.
CoalescenceReport coalescence_diagnostic(const DriftField& b, std::size_t paths,
                                         double half_width, double t, double dt,
                                         std::uint64_t base_seed);

/// Endpoints for a single noise amplitude (used by coalescence_diagnostic).
std::vector<double> forward_endpoints(const DriftField& b, double noise_amp,
                                      std::size_t paths, double half_width, double t,
                                      double dt, std::uint64_t base_seed);

double sample_std(std::span<const double> x);

}  // namespace regulab::noise
