#pragma once

#include "regulab/core/field.hpp"

#include <array>
#include <functional>
#include <vector>

namespace regulab::peridyn {

/// Radial micromodulus with horizon delta; zero for r >= delta.
///   Constant:   lambda0
///   Triangular: lambda0 (1 - r/delta)
struct Micromodulus {
    enum class Kind { Constant, Triangular };
    Kind kind = Kind::Constant;
    double lambda0 = 1.0;
    double delta = 0.1;

    void validate() const;
    double operator()(double r) const noexcept;
    /// The profile without the cutoff at delta (clamped at 0); used for the
    /// sliver of a boundary cell that reaches into the horizon.
    double extended(double r) const noexcept;
};

/// int_{-delta}^{delta} lambda(|h|) h^p dh in closed form (odd p gives 0).
double raw_moment(const Micromodulus& mu, unsigned p);

/// The same integral by 64-point Gauss-Legendre on each half of the horizon.
double raw_moment_quadrature(const Micromodulus& mu, unsigned p);

/// Coefficient moment of the expansion, raw_moment(order + 2); order even >= 2.
double moment(const Micromodulus& mu, unsigned order);

/// (L u)(x_j) = sum_i lambda(|h|) h^2 (u_i - u_j) w_i, h = x_i - x_j, over the
/// nodes of the domain inside the open horizon. w_i is the length of node
/// i's cell (half cells at the domain ends) that lies within the horizon, so
/// no value outside the domain is ever used. Needs delta >= 2 dx.
Field apply_nonlocal_1d(const Field& u, const Micromodulus& mu);

/// The same operator evaluated only at the listed node indices.
std::vector<double> apply_nonlocal_at(const Field& u, const Micromodulus& mu,
                                      const std::vector<std::size_t>& nodes);

/// Even-order Taylor surrogate sum_k c_k u^(k), c_k = raw_moment(k + 2) / k!.
struct LocalSurrogate {
    unsigned order;                                // m
    std::vector<std::pair<unsigned, double>> terms;  // (k, c_k), k even, 2..m

    double coefficient(unsigned k) const;
};

LocalSurrogate local_surrogate(const Micromodulus& mu, unsigned m);

/// Smooth profile with the derivatives the surrogates need.
struct Profile {
    std::function<double(double)> value;
    std::function<double(double)> d2;
    std::function<double(double)> d4;
};

enum class Normalization { FixedC2, Raw };

struct StudyConfig {
    Profile u;
    Micromodulus::Kind kind = Micromodulus::Kind::Constant;
    double lambda0 = 1.0;              // amplitude at the first horizon
    std::vector<double> deltas;        // strictly decreasing
    Normalization normalization = Normalization::FixedC2;
    unsigned surrogate_order = 2;      // 2 or 4
    double x_min = 0.0;
    double x_max = 1.0;
    double dx = 1.25e-5;
    std::size_t sample_nodes = 101;    // evaluation points per region
};

struct StudyRow {
    double delta;
    double lambda0;
    double interior_error;  // nodes at least delta from the boundary
    double boundary_error;  // nodes closer than delta; reported only
};

struct StudyReport {
    std::vector<StudyRow> rows;
    double observed_order;  // least-squares slope of log E against log delta
};

StudyReport convergence_study(const StudyConfig& config);

/// Least-squares slope of log y against log x.
double fitted_order(const std::vector<double>& x, const std::vector<double>& y);

/// M_ijkl = 1/2 int_{|h| < delta} lambda(|h|) h_i h_j h_k h_l dh.
struct MomentTensor3 {
    std::array<double, 81> table{};
    double xxxx = 0.0;
    double xxyy = 0.0;
    double xyxy = 0.0;
    double c = 0.0;                  // least-squares isotropic coefficient
    double isotropy_deviation = 0.0; // |M - c T| / |M|
    double symmetry_deviation = 0.0; // largest gap between permuted entries / |M|
    double mu = 0.0;                 // Lame pair read off the isotropic form
    double lambda_lame = 0.0;
    double bulk = 0.0;               // lambda + 2 mu / 3

    double at(int i, int j, int k, int l) const { return table[((i * 3 + j) * 3 + k) * 3 + l]; }
};

/// Radial Gauss-Legendre times an angular product rule (Gauss-Legendre in
/// cos(theta), trapezoid in phi), exact for the degree-4 angular integrand.
MomentTensor3 moment_tensor_3d(const Micromodulus& mu);

/// Closed-form int_0^delta lambda(r) r^p dr.
double radial_moment(const Micromodulus& mu, unsigned p);

}  // namespace regulab::peridyn
