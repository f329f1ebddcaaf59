#include "oracles.hpp"

#include "regulab/core/errors.hpp"
#include "regulab/rdnonlocal/rdnonlocal.hpp"

#include <gtest/gtest.h>

using namespace regulab;
using namespace regulab::rdnonlocal;

namespace {

double closed_form(const RDParams& p, double x)
{
    const double s = std::sqrt(p.xi * p.xi + 4 * p.D * p.f);
    return p.f / s * std::exp(-s / (2 * p.D) * std::abs(x)) * std::exp(p.xi * x / (2 * p.D));
}

}  // namespace

TEST(Params, ValidationRejectsNonPhysicalValues)
{
    RDParams p;
    EXPECT_NO_THROW(p.validate());
    p.D = 0;
    EXPECT_THROW(p.validate(), ValidationError);
    p = RDParams{};
    p.tau = -1;
    EXPECT_THROW(p.validate(), ValidationError);
    EXPECT_NEAR(RDParams{}.s(), std::sqrt(0.04 + 1.0), 1e-15);
}

TEST(Kernel, ClosedFormSolvesTheStationaryInhibitorEquationOffTheOrigin)
{
    RDParams p;
    const double h = 1e-4;
    for (double x : {-2.0, -0.7, 0.4, 1.9}) {
        const double g0 = closed_form(p, x), gp = closed_form(p, x + h), gm = closed_form(p, x - h);
        const double second = (gp - 2 * g0 + gm) / (h * h);
        const double first = (gp - gm) / (2 * h);
        EXPECT_NEAR(-p.D * second + p.xi * first + p.f * g0, 0.0, 1e-6);
    }
    // Derivative jump -f/D carries the unit source.
    const double g0 = closed_form(p, 0.0);
    const double right = (-3 * g0 + 4 * closed_form(p, h) - closed_form(p, 2 * h)) / (2 * h);
    const double left = (3 * g0 - 4 * closed_form(p, -h) + closed_form(p, -2 * h)) / (2 * h);
    EXPECT_NEAR(right - left, -p.f / p.D, 1e-3);
}

TEST(Kernel, DiscreteMassAndMirrorSymmetry)
{
    RDParams p;
    const Grid1D g(-20, 20, 1024, Boundary::Periodic);
    const auto k = asym_kernel(p, g);
    EXPECT_LT(std::abs(k.mass - 1.0), 1e-6);
    const auto point = asym_kernel(p, g, greenlink::KernelSampling::Point);
    for (std::size_t j : {3u, 50u, 1000u})
        EXPECT_NEAR(point.values[j], closed_form(p, greenlink::signed_offset(g, j)), 1e-14);
    const auto mirrored = inhibitor_green(p, g, greenlink::KernelSampling::Point);
    for (std::size_t j = 1; j < g.size(); ++j) EXPECT_DOUBLE_EQ(mirrored.values[j], point.values[g.size() - j]);
    p.xi = 0.0;
    const auto even = asym_kernel(p, g);
    for (std::size_t j = 1; j < g.size(); ++j) EXPECT_DOUBLE_EQ(even.values[j], even.values[g.size() - j]);
    EXPECT_THROW(asym_kernel(RDParams{}, Grid1D(-1, 1, 64, Boundary::Periodic)), DomainTooSmallError);
}

TEST(System, HomogeneousSteadyStateHasZeroRightHandSide)
{
    RDParams p;
    const auto [u_star, w_star] = bistable_steady_state(p);
    EXPECT_NEAR(u_star - u_star * u_star * u_star - p.g * w_star, 0.0, 1e-15);
    EXPECT_NEAR(p.h * u_star - p.f * w_star, 0.0, 1e-15);
    const Grid1D g(-20, 20, 256, Boundary::Periodic);
    const auto [ru, rw] = system_rhs(Field::constant(g, u_star), Field::constant(g, w_star), p);
    EXPECT_LT(oracle::max_abs(ru, std::vector<double>(g.size(), 0.0)), 1e-14);
    EXPECT_LT(oracle::max_abs(rw, std::vector<double>(g.size(), 0.0)), 1e-14);
    RDParams strong = p;
    strong.g = 2.0;
    EXPECT_THROW(bistable_steady_state(strong), ValidationError);
}

TEST(System, ExplicitStepLimitIsEnforced)
{
    RDParams p;
    p.tau = 1e-3;
    const Grid1D g(-20, 20, 512, Boundary::Periodic);
    const double limit = system_dt_limit(p, g);
    EXPECT_NEAR(limit, p.tau / (p.f + p.xi / g.dx()), 1e-18);
    const Field u = Field::sample(g, [](double x) { return 0.5 * std::exp(-x * x); });
    EXPECT_THROW(full_system_solve(u, Field::zeros(g), p, {2 * limit, 0.1, 1}), StabilityError);
}

TEST(System, StartsAtSteadyStateAndStaysThere)
{
    RDParams p;
    const auto [u_star, w_star] = bistable_steady_state(p);
    const Grid1D g(-20, 20, 256, Boundary::Periodic);
    const auto tr = full_system_solve(Field::constant(g, u_star), Field::constant(g, w_star), p, {1e-3, 0.2, 1000});
    for (std::size_t j = 0; j < g.size(); ++j) {
        EXPECT_NEAR(tr.back().u[j], u_star, 1e-12);
        EXPECT_NEAR(tr.back().w[j], w_star, 1e-12);
    }
}

TEST(TauLimit, DiscrepancyShrinksWithTheRelaxationTime)
{
    RDParams p;
    const Grid1D g(-20, 20, 512, Boundary::Periodic);
    const Field u0 = Field::sample(g, [](double x) { return 0.5 * std::exp(-x * x); });
    const auto r = tau_limit_report(u0, std::nullopt, p, {0.1, 0.01, 0.001}, {2.5e-4, 0.5, 100000});
    EXPECT_NEAR(r.coupling, p.sigma() / p.f, 1e-15);
    EXPECT_TRUE(r.nonincreasing);
    EXPECT_LE(r.members.back().discrepancy, 1e-2);
    for (std::size_t i = 1; i < r.members.size(); ++i)
        EXPECT_LE(r.members[i].discrepancy, r.members[i - 1].discrepancy);
    EXPECT_THROW(tau_limit_report(u0, std::nullopt, p, {0.01, 0.1}, {2.5e-4, 0.5, 1}), ValidationError);
}
