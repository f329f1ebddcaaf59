#include "oracles.hpp"

#include "regulab/core/errors.hpp"
#include "regulab/core/stencil.hpp"
#include "regulab/noise/noise.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cstdlib>

using namespace regulab;
using namespace regulab::noise;

namespace {

class ThreadCount {
public:
    explicit ThreadCount(const char* n) { setenv("REGULAB_THREADS", n, 1); }
    ~ThreadCount() { unsetenv("REGULAB_THREADS"); }
};

HeatConfig quiet_config(const Grid1D& g, double amp)
{
    return {Field::sample(g, [](double x) { return std::sin(oracle::pi * x); }), {}, amp, {0.02, 2.0, 1000}};
}

// Expected value of exp(-y^2) under y ~ N(m, t), the heat flow at diffusivity 1/2.
double smoothed_gaussian(double m, double t)
{
    return std::exp(-m * m / (1 + 2 * t)) / std::sqrt(1 + 2 * t);
}

}  // namespace

TEST(Rng, SplitMixReferenceValueAndStreamIndependence)
{
    EXPECT_EQ(splitmix64(0), 0xe220a8397b1dcdafULL);
    SeededRng a(7, 3), b(7, 3), c(7, 4);
    EXPECT_EQ(a.normal(), b.normal());
    EXPECT_NE(a.normal(), c.normal());
}

TEST(Welford, MatchesTwoPassAndMerges)
{
    SeededRng rng(1, 0);
    std::vector<std::vector<double>> rows(200, std::vector<double>(3));
    for (auto& r : rows)
        for (auto& v : r) v = 5 + rng.normal();
    Welford all(3), first(3), second(3);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        all.add(rows[i]);
        (i < 77 ? first : second).add(rows[i]);
    }
    first.merge(second);
    for (std::size_t k = 0; k < 3; ++k) {
        double mean = 0, ss = 0;
        for (const auto& r : rows) mean += r[k];
        mean /= rows.size();
        for (const auto& r : rows) ss += (r[k] - mean) * (r[k] - mean);
        EXPECT_NEAR(all.mean()[k], mean, 1e-12);
        EXPECT_NEAR(all.variance()[k], ss / (rows.size() - 1), 1e-12);
        EXPECT_NEAR(first.mean()[k], mean, 1e-12);
        EXPECT_NEAR(first.variance()[k], ss / (rows.size() - 1), 1e-12);
    }
    EXPECT_EQ(first.count(), 200u);
    EXPECT_THROW(all.add(std::vector<double>(2)), ValidationError);
}

TEST(Heat, StationaryVarianceMatchesTheGreenFunctionDiagonal)
{
    const Grid1D g(0, 1, 65, Boundary::Dirichlet0);
    const HeatConfig cfg{Field::zeros(g), {}, 1.0, {0.02, 2.0, 1000}};
    const auto stats = heat_ensemble(10000, cfg, 42);
    EXPECT_EQ(stats.n_samples, 10000u);
    for (std::size_t j = 30; j <= 34; ++j) {
        const double x = g.x(j);
        EXPECT_NEAR(stats.variance[j] / (x * (1 - x) / 2), 1.0, 0.05) << x;
    }
    EXPECT_EQ(stats.variance[0], 0.0);
}

TEST(Heat, NoiselessPathIsTheDeterministicCrankNicolsonMarch)
{
    const Grid1D g(0, 1, 33, Boundary::Dirichlet0);
    const auto cfg = quiet_config(g, 0.0);
    SeededRng rng(3, 0);
    const auto path = spde_heat_path(cfg, rng);
    const ThetaStepper heat(diff2_matrix(g), 0.5);
    Field u = cfg.u0;
    for (int k = 0; k < 100; ++k) u = heat.step(u, 0.02);
    EXPECT_LT(oracle::max_abs(path.back().u.values(), u.values()), 1e-12);
}

TEST(Heat, EnsembleDoesNotDependOnThreadCount)
{
    const Grid1D g(0, 1, 17, Boundary::Dirichlet0);
    const auto cfg = quiet_config(g, 0.5);
    EnsembleStats one = [&] { ThreadCount t("1"); return heat_ensemble(300, cfg, 9); }();
    EnsembleStats four = [&] { ThreadCount t("4"); return heat_ensemble(300, cfg, 9); }();
    EXPECT_TRUE(std::ranges::equal(one.mean.values(), four.mean.values()));
    EXPECT_TRUE(std::ranges::equal(one.variance.values(), four.variance.values()));
}

TEST(Heat, RejectsBadConfigurations)
{
    const Grid1D g(0, 1, 17, Boundary::Dirichlet0);
    SeededRng rng(0, 0);
    auto cfg = quiet_config(g, 1.0);
    cfg.step = {0.05, 2.0, 1};
    EXPECT_THROW(spde_heat_path(cfg, rng), ValidationError);
    cfg = quiet_config(g, -1.0);
    EXPECT_THROW(spde_heat_path(cfg, rng), ValidationError);
    cfg = quiet_config(Grid1D(0, 1, 17, Boundary::Periodic), 1.0);
    EXPECT_THROW(spde_heat_path(cfg, rng), ValidationError);
    EXPECT_THROW(heat_ensemble(1, quiet_config(g, 1.0), 0), ValidationError);
}

TEST(Transport, ZeroDriftMeanIsTheHalfDiffusivityHeatFlow)
{
    const Grid1D g(-2, 2, 21, Boundary::Neumann0);
    const TransportConfig cfg{[](double x) { return std::exp(-x * x); }, DriftField::constant(0.0), 0.5, 0.01, 4000};
    const auto est = stochastic_transport_mean(g, cfg, 11);
    for (std::size_t j = 0; j < g.size(); ++j) {
        EXPECT_EQ(est.used[j], 4000u);
        EXPECT_LE(std::abs(est.mean[j] - smoothed_gaussian(g.x(j), 0.5)), 3 * est.standard_error[j] + 0.1 * cfg.dt);
    }
}

TEST(Transport, ConstantDriftShiftsTheHeatFlow)
{
    const Grid1D g(-2, 2, 21, Boundary::Neumann0);
    for (bool heun : {false, true}) {
        const TransportConfig cfg{[](double x) { return std::exp(-x * x); }, DriftField::constant(0.8), 0.5, 0.01, 4000, heun};
        const auto est = stochastic_transport_mean(g, cfg, 5);
        for (std::size_t j = 0; j < g.size(); ++j)
            EXPECT_LE(std::abs(est.mean[j] - smoothed_gaussian(g.x(j) - 0.4, 0.5)),
                      3 * est.standard_error[j] + 0.1 * cfg.dt);
    }
}

TEST(Transport, ConstantDatumIsPreservedExactly)
{
    const Grid1D g(-1, 1, 11, Boundary::Neumann0);
    const TransportConfig cfg{[](double) { return 2.5; }, DriftField::square_root(), 1.0, 0.01, 100};
    const auto est = stochastic_transport_mean(g, cfg, 1);
    for (std::size_t j = 0; j < g.size(); ++j) {
        EXPECT_EQ(est.mean[j], 2.5);
        EXPECT_EQ(est.standard_error[j], 0.0);
    }
    auto bad = cfg;
    bad.dt = 2.0;
    EXPECT_THROW(stochastic_transport_mean(g, bad, 1), ValidationError);
}

TEST(Coalescence, NoiseSeparatesPathsThatTheRootDriftWouldPinch)
{
    const auto r = coalescence_diagnostic(DriftField::square_root(), 64, 1e-6, 1.0, 1e-3, 42);
    EXPECT_EQ(r.endpoints_with_noise.size(), 64u);
    EXPECT_NEAR(r.spread_with_noise, sample_std(r.endpoints_with_noise), 0.0);
    EXPECT_GT(r.spread_with_noise, r.spread_without_noise);
    EXPECT_NEAR(sample_std(std::vector<double>{1, 2, 3}), 1.0, 1e-15);
    EXPECT_FALSE(DriftField::square_root().lipschitz());
    EXPECT_DOUBLE_EQ(DriftField::square_root()(-4.0), -2.0);
}
