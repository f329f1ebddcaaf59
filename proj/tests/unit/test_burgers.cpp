#include "oracles.hpp"

#include "regulab/burgers/burgers.hpp"
#include "regulab/core/errors.hpp"

#include <gtest/gtest.h>

using namespace regulab;

namespace {

// Flux at x/t = 0 of the exact Riemann solution for f(u) = u^2/2.
double riemann_flux_at_origin(double left, double right)
{
    if (left <= right) {
        if (left >= 0) return 0.5 * left * left;
        if (right <= 0) return 0.5 * right * right;
        return 0.0;
    }
    const double speed = 0.5 * (left + right);
    const double u = speed > 0 ? left : (speed < 0 ? right : left);
    return 0.5 * u * u;
}

}  // namespace

TEST(Godunov, FluxMatchesExactRiemannSolution)
{
    const double values[] = {-2.0, -1.0, -0.3, 0.0, 0.4, 1.0, 1.5};
    for (double l : values)
        for (double r : values)
            EXPECT_DOUBLE_EQ(burgers::godunov_flux(l, r), riemann_flux_at_origin(l, r))
                << "l=" << l << " r=" << r;
}

TEST(Godunov, CourantLimitIsEnforced)
{
    const Grid1D g(0, 1, 101, Boundary::Periodic);
    const Field u = Field::constant(g, 2.0);
    EXPECT_THROW(burgers::godunov_step(u, 0.5 * g.dx()), CflError);
    try {
        burgers::check_cfl(u, g.dx());
    } catch (const CflError& e) {
        EXPECT_NEAR(e.ratio(), 2.0, 1e-12);
    }
    EXPECT_NO_THROW(burgers::godunov_step(u, 0.4 * g.dx()));
}

TEST(Godunov, ConservesMassAndBoundsOnPeriodicGrid)
{
    const Grid1D g(0, 1, 200, Boundary::Periodic);
    const Field u0 = Field::sample(g, [](double x) { return 0.5 + std::sin(2 * oracle::pi * x); });
    const auto tr = burgers::solve(u0, 0.0, {0.4 * g.dx() / 1.5, 0.5, 10});
    for (const auto& s : tr) {
        EXPECT_NEAR(mass(s.u), mass(u0), 1e-13);
        for (std::size_t j = 0; j < g.size(); ++j) {
            EXPECT_LE(s.u[j], 1.5 + 1e-12);
            EXPECT_GE(s.u[j], -0.5 - 1e-12);
        }
    }
}

TEST(Godunov, SelectsTheRarefactionNotTheExpansionShock)
{
    const Grid1D g(-1, 1, 801, Boundary::Neumann0);
    const Field u0 = Field::sample(g, [](double x) { return x < 0 ? 0.0 : 1.0; });
    const auto tr = burgers::solve(u0, 0.0, {0.5 * g.dx(), 0.5, 100000});
    const Field& u = tr.back().u;
    for (double x : {0.1, 0.25, 0.4}) {
        const auto j = static_cast<std::size_t>(std::lround((x + 1) / g.dx()));
        EXPECT_NEAR(u[j], x / 0.5, 0.03) << "x=" << x;
    }
}

TEST(Viscous, ConservesMassOnPeriodicGrid)
{
    const Grid1D g(0, 1, 128, Boundary::Periodic);
    const Field u0 = Field::sample(g, [](double x) { return std::sin(2 * oracle::pi * x); });
    const auto tr = burgers::solve(u0, 0.01, {1e-3, 0.3, 50});
    for (const auto& s : tr) EXPECT_NEAR(mass(s.u), mass(u0), 1e-13);
}

TEST(Viscous, TravellingWaveIsSecondOrderAccurate)
{
    const double eps = 0.05;
    std::vector<double> errors;
    for (auto [n, dt] : {std::pair{512u, 1e-3}, std::pair{1023u, 5e-4}}) {
        const Grid1D g(-2, 2, n, Boundary::Neumann0);
        const Field u0 = Field::sample(g, [&](double x) { return oracle::burgers_front(x, 0, eps); });
        const auto tr = burgers::solve(u0, eps, {dt, 1.0, 1000000});
        const Field exact = Field::sample(g, [&](double x) { return oracle::burgers_front(x, 1.0, eps); });
        errors.push_back(max_abs_diff(tr.back().u.values(), exact.values()));
    }
    EXPECT_LE(errors[0], 5e-3);
    const double ratio = errors[0] / errors[1];
    EXPECT_GE(ratio, 3.2);
    EXPECT_LE(ratio, 4.8);
}

TEST(Viscous, RejectsBadParameters)
{
    const Grid1D g(0, 1, 64, Boundary::Periodic);
    EXPECT_THROW(burgers::ViscousStepper(g, -1.0), ValidationError);
    EXPECT_THROW(burgers::ViscousStepper(g, 0.1, 0.3), ValidationError);
    EXPECT_THROW(burgers::vanishing_viscosity_sweep(Field::zeros(g), {0.01, 0.1}, {1e-3, 0.1, 1}),
                 ValidationError);
}

TEST(Sweep, DistancesShrinkAndProfilesSteepenAsViscosityVanishes)
{
    const Grid1D g(-1, 1, 512, Boundary::Dirichlet0);
    const Field u0 = Field::sample(g, [](double x) { return 1 - x * x; });
    const auto r = burgers::vanishing_viscosity_sweep(u0, {0.1, 0.01, 0.001}, {1e-3, 0.6, 1000});
    ASSERT_EQ(r.members.size(), 3u);
    EXPECT_TRUE(r.distances_nonincreasing);
    EXPECT_TRUE(r.profiles_steepen);
    for (std::size_t i = 1; i < 3; ++i) {
        EXPECT_LE(r.members[i].l1_distance, r.members[i - 1].l1_distance);
        EXPECT_GT(r.members[i].max_gradient, r.members[i - 1].max_gradient);
    }
}

TEST(Sweep, ResultDoesNotDependOnWorkerCount)
{
    const Grid1D g(-1, 1, 128, Boundary::Dirichlet0);
    const Field u0 = Field::sample(g, [](double x) { return 1 - x * x; });
    setenv("REGULAB_THREADS", "1", 1);
    const auto a = burgers::vanishing_viscosity_sweep(u0, {0.1, 0.05, 0.01}, {2e-3, 0.4, 1000});
    setenv("REGULAB_THREADS", "4", 1);
    const auto b = burgers::vanishing_viscosity_sweep(u0, {0.1, 0.05, 0.01}, {2e-3, 0.4, 1000});
    unsetenv("REGULAB_THREADS");
    for (std::size_t i = 0; i < a.members.size(); ++i)
        EXPECT_EQ(max_abs_diff(a.members[i].u_final.values(), b.members[i].u_final.values()), 0.0);
}
