#include "oracles.hpp"

#include "regulab/core/errors.hpp"
#include "regulab/core/stencil.hpp"
#include "regulab/greenlink/greenlink.hpp"

#include <gtest/gtest.h>

using namespace regulab;
using namespace regulab::greenlink;

namespace {

Grid1D default_grid(std::size_t n = 512) { return Grid1D(-8, 8, n, Boundary::Periodic); }

double inverse_identity_error(std::size_t n, double eps, KernelSampling s)
{
    const Grid1D g = default_grid(n);
    const Field u = Field::sample(g, [](double x) { return std::exp(-x * x); });
    const Field w = convolve(exp_kernel(eps, g, s), u);
    const Field lw = diff2(w);
    double err = 0;
    for (std::size_t j = 0; j < n; ++j) err = std::max(err, std::abs(w[j] - eps * lw[j] - u[j]));
    return err;
}

}  // namespace

TEST(ExpKernel, MassIsOneToSixDigits)
{
    for (auto s : {KernelSampling::Auto, KernelSampling::CellAverage, KernelSampling::KinkCorrected}) {
        const Kernel k = exp_kernel(0.1, default_grid(), s);
        EXPECT_LT(std::abs(k.mass - 1.0), 1e-6);
    }
    for (double eps : {1e-2, 1e-3}) EXPECT_LT(std::abs(exp_kernel(eps, default_grid()).mass - 1.0), 1e-6);
}

TEST(ExpKernel, SamplesTheClosedFormAwayFromTheOrigin)
{
    const double eps = 0.1;
    const Grid1D g = default_grid();
    const Kernel k = exp_kernel(eps, g, KernelSampling::Point);
    for (std::size_t j : {1u, 7u, 40u, 505u}) {
        const double x = signed_offset(g, j);
        EXPECT_NEAR(k.values[j], std::exp(-std::abs(x) / std::sqrt(eps)) / (2 * std::sqrt(eps)), 1e-14);
    }
}

TEST(ExpKernel, NarrowDomainIsRejectedWithTheRequiredWidth)
{
    const Grid1D narrow(-1, 1, 64, Boundary::Periodic);
    try {
        exp_kernel(1.0, narrow);
        FAIL() << "expected DomainTooSmallError";
    } catch (const DomainTooSmallError& e) {
        EXPECT_GT(e.required_width(), 2.0);
    }
    EXPECT_THROW(exp_kernel(-0.1, default_grid()), ValidationError);
    EXPECT_THROW(exp_kernel(0.1, Grid1D(-8, 8, 512, Boundary::Neumann0)), ValidationError);
}

TEST(ExpKernel, InvertsTheRegularizingOperatorAtSecondOrder)
{
    for (auto s : {KernelSampling::CellAverage, KernelSampling::KinkCorrected}) {
        const double coarse = inverse_identity_error(256, 0.1, s);
        const double fine = inverse_identity_error(512, 0.1, s);
        EXPECT_GE(coarse / fine, 3.2);
        EXPECT_LE(coarse / fine, 4.8);
    }
}

TEST(SpectralKernel, FourierCoefficientsAreTheInverseSymbol)
{
    const Grid1D g = default_grid(128);
    const OperatorCoeffs coeffs{{0.1, 0.002}};
    const Kernel k = spectral_kernel(coeffs, g);
    EXPECT_LT(std::abs(k.mass - 1.0), 1e-12);
    const auto spectrum = oracle::direct_dft(k.values);
    for (std::size_t j = 0; j < g.size(); ++j) {
        const double freq = double(j < g.size() / 2 ? std::ptrdiff_t(j) : std::ptrdiff_t(j) - std::ptrdiff_t(g.size()));
        const double w = 2 * oracle::pi * freq / g.length();
        const double expected = 1.0 / (1.0 + 0.1 * w * w + 0.002 * w * w * w * w);
        EXPECT_NEAR(spectrum[j].real() * g.dx(), expected, 1e-12);
        EXPECT_NEAR(spectrum[j].imag() * g.dx(), 0.0, 1e-12);
    }
    EXPECT_THROW(spectral_kernel({{}}, g), ValidationError);
    EXPECT_THROW(spectral_kernel({{-1.0}}, g), ValidationError);
}

TEST(Convolution, FastAndDirectSumsAgree)
{
    const Grid1D g = default_grid(256);
    const Kernel k = exp_kernel(0.05, g);
    const Field u = Field::sample(g, [](double x) { return std::sin(x) * std::exp(-0.1 * x * x); });
    const Field direct = convolve_direct(k, u);
    EXPECT_LT(max_abs_diff(convolve(k, u).values(), direct.values()), 1e-13);
    const auto cached = Convolver(k).apply(u.values());
    EXPECT_LT(max_abs_diff(cached, direct.values()), 1e-13);
    const Grid1D odd(-8, 8, 300, Boundary::Periodic);
    const Field v = Field::constant(odd, 2.0);
    const Kernel ko = exp_kernel(0.05, odd);
    const Field cv = convolve(ko, v);
    for (std::size_t j = 0; j < odd.size(); ++j) EXPECT_NEAR(cv[j], 2.0 * ko.mass, 1e-12);
}

TEST(Waves, NonlocalAndRegularizedSolversAgree)
{
    const Grid1D g = default_grid();
    const Field u0 = Field::sample(g, [](double x) { return std::exp(-x * x); });
    const auto r = equivalence_report(u0, Field::zeros(g), 0.1, {0.5 * g.dx(), 2.0, 1});
    EXPECT_LE(r.difference, 1e-4);
    EXPECT_TRUE(r.pass);
    EXPECT_NEAR(r.observed_order, 2.0, 0.3);
}

TEST(Waves, SmallEpsilonEquivalenceStaysWithinTheDiscretizationBound)
{
    const Grid1D g = default_grid();
    const Field u0 = Field::sample(g, [](double x) { return std::exp(-x * x); });
    for (double eps : {1e-2, 1e-3}) {
        const auto r = equivalence_report(u0, Field::zeros(g), eps, {0.5 * g.dx(), 2.0, 1});
        EXPECT_TRUE(r.pass) << "eps=" << eps << " gap " << r.difference << " bound " << r.tolerance;
    }
}

TEST(Waves, ModesOscillateAtTheDispersionFrequency)
{
    const Grid1D g(0, 8 * oracle::pi, 512, Boundary::Periodic);
    const double eps = 0.1;
    const Kernel k = exp_kernel(eps, g);
    for (int mode : {1, 2, 3}) {
        const Field u0 = Field::sample(g, [mode](double x) { return std::cos(mode * x); });
        const auto tr = nonlocal_wave_solve({u0, Field::zeros(g)}, k, {0.5 * g.dx(), 20.0, 1});
        std::vector<double> t, y;
        for (const auto& s : tr) {
            t.push_back(s.t);
            y.push_back(s.u[0]);
        }
        const double expected = mode / std::sqrt(1 + eps * mode * mode);
        EXPECT_NEAR(dispersion(mode, eps), expected, 1e-15);
        EXPECT_LT(std::abs(oscillation_frequency(t, y) / expected - 1), 0.01) << "k=" << mode;
    }
}

TEST(Waves, VerletConservesItsShadowEnergy)
{
    const Grid1D g(0, 1, 512, Boundary::Periodic);
    const Field u0 = Field::sample(g, [](double x) { return std::sin(2 * oracle::pi * x); });
    const double dt = 0.5 * g.dx();
    const auto tr = regularized_wave_solve({u0, Field::zeros(g)}, 0.0, {dt, 1.0, 1});
    const double e0 = verlet_wave_energy(tr[0].u, tr[0].v, dt);
    double drift = 0;
    for (const auto& s : tr) drift = std::max(drift, std::abs(verlet_wave_energy(s.u, s.v, dt) / e0 - 1));
    EXPECT_LT(drift, 1e-12);
}

TEST(Waves, CourantViolationIsReported)
{
    const Grid1D g = default_grid(128);
    const Field u0 = Field::sample(g, [](double x) { return std::exp(-x * x); });
    EXPECT_THROW(nonlocal_wave_solve({u0, Field::zeros(g)}, exp_kernel(0.1, g), {1.5 * g.dx(), 1.0, 1}), CflError);
}
