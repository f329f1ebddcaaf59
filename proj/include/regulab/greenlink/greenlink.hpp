#pragma once

#include "regulab/core/banded.hpp"
#include "regulab/core/fft.hpp"
#include "regulab/core/field.hpp"
#include "regulab/core/time_stepping.hpp"

#include <vector>

namespace regulab::greenlink {

/// Node-aligned convolution kernel on a periodic grid. values[j] belongs to the
/// signed offset j*dx for j < n/2 and (j - n)*dx otherwise.
struct Kernel {
    Grid1D grid;
    std::vector<double> values;
    double mass = 0.0;            // sum values * dx, never renormalized
    double support_radius = 0.0;  // largest offset with a nonzero sample

    /// 1 - mass for kernels whose continuum integral is 1.
    double deficit() const noexcept { return 1.0 - mass; }
};

/// Signed periodic offset of node j from node 0.
double signed_offset(const Grid1D& grid, std::size_t j) noexcept;

/// How the continuum kernel is turned into node values.
///   CellAverage   - integral of G over each node's cell; exact mass up to the
///                   far tail, robust when sqrt(eps) is below the mesh size.
///   Point         - G at the node.
///   KinkCorrected - G at the node with the trapezoid end correction for the
///                   kink at 0 (node 0 lowered by dx / (12 eps)); its symbol is
///                   fourth-order accurate when sqrt(eps) is well resolved.
///   Auto          - KinkCorrected if dx <= kKinkResolution * sqrt(eps), else
///                   CellAverage.
enum class KernelSampling { Auto, CellAverage, Point, KinkCorrected };

inline constexpr double kKinkResolution = 0.15;

/// Replaces Auto by the concrete choice it makes on `grid`.
KernelSampling resolve_sampling(double epsilon, const Grid1D& grid, KernelSampling sampling);

/// exp(-|x|/sqrt(eps)) / (2 sqrt(eps)), the Green's function of 1 - eps d_xx.
/// Requires exp(-L/(2 sqrt(eps))) < kWidthTolerance, else DomainTooSmallError.
Kernel exp_kernel(double epsilon, const Grid1D& grid,
                  KernelSampling sampling = KernelSampling::Auto);

inline constexpr double kWidthTolerance = 1e-10;

/// Coefficients a_1..a_n of 1 + sum a_k (-d_xx)^k; all positive, at least one.
struct OperatorCoeffs {
    std::vector<double> a;
    void validate() const;
    /// 1 / (1 + sum a_k w^(2k)).
    double inverse_symbol(double w) const;
};

/// Kernel from the inverse DFT of the inverse symbol at w_j = 2 pi j / L.
Kernel spectral_kernel(const OperatorCoeffs& coeffs, const Grid1D& grid);

/// Circular convolution (k * u)_i = sum_j k_{i-j} u_j dx. Uses the DFT when n
/// is a power of two and the direct sum otherwise.
Field convolve(const Kernel& k, const Field& u);
Field convolve_direct(const Kernel& k, const Field& u);

/// Convolution with a fixed kernel whose spectrum is computed once.
class Convolver {
public:
    explicit Convolver(const Kernel& k);
    std::vector<double> apply(std::span<const double> u) const;

private:
    std::size_t n_;
    std::vector<Complex> spectrum_;
};

struct WaveState {
    Field u;
    Field v;
};

struct WaveSnapshot {
    double t;
    Field u;
    Field v;
};

using WaveTrajectory = std::vector<WaveSnapshot>;

/// Velocity Verlet for u_tt = k * diff2 u. Requires dt <= dx (CflError otherwise).
WaveTrajectory nonlocal_wave_solve(const WaveState& state, const Kernel& k,
                                   const StepControl& step);

/// Velocity Verlet for u_tt - eps diff2 u_tt = diff2 u; each acceleration is a
/// cyclic banded solve. eps = 0 gives the classical wave equation.
WaveTrajectory regularized_wave_solve(const WaveState& state, double epsilon,
                                      const StepControl& step);

/// 1/2 sum (v^2 + ((u_{j+1} - u_j)/dx)^2) dx.
double wave_energy(const Field& u, const Field& v);

/// Quantity conserved exactly by velocity Verlet for the classical wave
/// equation: wave_energy - (dt^2 / 8) sum (diff2 u)^2 dx.
double verlet_wave_energy(const Field& u, const Field& v, double dt);

/// Angular frequency from the mean spacing of linearly interpolated zero
/// crossings of a sampled signal. Needs at least two crossings.
double oscillation_frequency(std::span<const double> t, std::span<const double> y);

/// Continuum dispersion relation |k| / sqrt(1 + eps k^2).
double dispersion(double k, double epsilon) noexcept;

struct EquivalenceReport {
    double epsilon;
    double dx;
    double difference;          // max over stored times of the L-inf gap
    double coarse_difference;   // same at half resolution
    double observed_order;
    double kernel_deficit;
    KernelSampling sampling;    // resolved on the fine grid, reused on the coarse one
    double tolerance;           // factor * (dx^2 + deficit)
    bool pass;
};

/// Runs both wave solvers from the same data at n and at n/2 (every other
/// node, dt unchanged) and compares them. Both resolutions use the kernel
/// sampling resolved on the fine grid.
EquivalenceReport equivalence_report(const Field& u0, const Field& v0, double epsilon,
                                     const StepControl& step, double factor = 0.15,
                                     KernelSampling sampling = KernelSampling::Auto);

}  // namespace regulab::greenlink
