#pragma once

#include "regulab/core/field.hpp"
#include "regulab/core/time_stepping.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace regulab::bfheat {

/// Heat flux density phi(p) as a function of the gradient p, with its slope
/// and the stored energy W (W' = phi, W(0) = 0).
///
/// Cubic is phi(p) = p^3 - p: backward-parabolic on |p| < 1/sqrt(3), with the
/// stable branches around p = +-1 and double-well W = p^4/4 - p^2/2.
/// PiecewiseLinear passes through the origin with slopes[i] active between
/// breakpoints[i-1] and breakpoints[i].
class FluxFunction {
public:
    enum class Kind { Linear, Cubic, PiecewiseLinear };

    static FluxFunction linear(double a);
    static FluxFunction cubic();
    static FluxFunction piecewise_linear(std::vector<double> breakpoints,
                                         std::vector<double> slopes);

    Kind kind() const noexcept { return kind_; }
    double value(double p) const;
    double slope(double p) const;
    double energy(double p) const;

    /// max |phi'(p)| over p in [lo, hi].
    double max_abs_slope(double lo, double hi) const;

private:
    FluxFunction() = default;

    Kind kind_ = Kind::Linear;
    double a_ = 1.0;
    std::vector<double> breaks_;
    std::vector<double> slopes_;
};

/// Half-node gradients (u_{j+1} - u_j)/dx over every cell of the grid.
std::vector<double> cell_gradients(const Field& u);

/// Conservative flux divergence (phi(p_{j+1/2}) - phi(p_{j-1/2})) / dx;
/// zero on Dirichlet0 boundary nodes.
std::vector<double> flux_divergence(const Field& u, const FluxFunction& phi);

/// dt limit dx^2 / (2 max|phi'|) of the explicit flux term at the current gradients.
double explicit_dt_limit(const Field& u, const FluxFunction& phi);

/// u_t = div phi(grad u) - eps diff4 u: explicit flux, backward Euler in
/// diff4. Periodic or Dirichlet0 grids. Throws StabilityError when dt
/// exceeds explicit_dt_limit.
class BiharmonicStepper {
public:
    BiharmonicStepper(const Grid1D& grid, FluxFunction phi, double epsilon);
    Field step(const Field& u, double dt) const;

private:
    FluxFunction phi_;
    double epsilon_;
    ThetaStepper implicit_;
};

/// (I - eps diff2)(u+ - u)/dt = div phi(grad u).
class PseudoparabolicStepper {
public:
    PseudoparabolicStepper(const Grid1D& grid, FluxFunction phi, double epsilon);
    Field step(const Field& u, double dt) const;

private:
    FluxFunction phi_;
    double epsilon_;
    ThetaStepper implicit_;
};

Field step_biharmonic(const Field& u, const FluxFunction& phi, double epsilon, double dt);
Field step_pseudoparabolic(const Field& u, const FluxFunction& phi, double epsilon, double dt);

/// sum W(p_{j+1/2}) dx + (curvature_weight / 2) sum (diff2 u)_j^2 dx.
/// With curvature_weight = eps this is the Lyapunov functional of the
/// biharmonic regularization; with 0 it is the one of the pseudoparabolic one.
double energy(const Field& u, const FluxFunction& phi, double curvature_weight);

struct GradientHistogram {
    std::vector<double> edges;  // bins + 1 entries
    std::vector<std::size_t> counts;
    std::size_t total = 0;

    std::size_t bins() const noexcept { return counts.size(); }
    double center(std::size_t i) const { return 0.5 * (edges[i] + edges[i + 1]); }
};

/// Histogram of cell gradients. The bins span the observed gradient range,
/// or `range` widened as needed to contain every sample.
GradientHistogram young_histogram(const Field& u, std::size_t bins,
                                  std::optional<std::pair<double, double>> range = std::nullopt);

struct Bimodality {
    bool has_two_peaks = false;
    double negative_peak = 0.0;  // centre of the tallest bin left of 0
    double positive_peak = 0.0;  // centre of the tallest bin right of 0
    /// Smallest count between the two peaks divided by the smaller peak count.
    double index = 1.0;
};

Bimodality bimodality(const GradientHistogram& h);

enum class Regularization { Biharmonic, Pseudoparabolic };

struct RegularizedRun {
    Field u_final;
    GradientHistogram histogram;
    std::vector<std::pair<double, double>> energy;  // (t, E)
    /// Largest single-step increase of the energy series (<= 0 when dissipative).
    double max_energy_increase;
};

RegularizedRun run(Regularization kind, const Field& u0, const FluxFunction& phi, double epsilon,
                   const StepControl& step, std::size_t bins = 64);

struct ComparisonMember {
    double epsilon;
    RegularizedRun biharmonic;
    RegularizedRun pseudoparabolic;
    double l2_distance;
};

struct ComparisonReport {
    std::vector<ComparisonMember> members;
};

ComparisonReport regularisation_comparison(const Field& u0, const FluxFunction& phi,
                                           const std::vector<double>& eps_list,
                                           const StepControl& step, std::size_t bins = 64);

}  // namespace regulab::bfheat
