#include "oracles.hpp"

#include "regulab/core/errors.hpp"
#include "regulab/peridyn/peridyn.hpp"

#include <gtest/gtest.h>

using namespace regulab;
using namespace regulab::peridyn;

namespace {

// int_{-d}^{d} lambda(|h|) h^p dh for even p, integrated by hand.
double hand_moment(Micromodulus::Kind kind, double lambda0, double d, unsigned p)
{
    const double q = p + 1.0;
    if (kind == Micromodulus::Kind::Constant) return 2 * lambda0 * std::pow(d, q) / q;
    return 2 * lambda0 * std::pow(d, q) / (q * (q + 1));
}

Micromodulus make(Micromodulus::Kind kind, double delta)
{
    Micromodulus mu;
    mu.kind = kind;
    mu.lambda0 = 1.5;
    mu.delta = delta;
    return mu;
}

StudyConfig sine_study(unsigned order)
{
    const double w = 2 * oracle::pi;
    StudyConfig cfg;
    cfg.u = {[w](double x) { return std::sin(w * x); },
             [w](double x) { return -w * w * std::sin(w * x); },
             [w](double x) { return w * w * w * w * std::sin(w * x); }};
    cfg.deltas = {0.2, 0.1, 0.05};
    cfg.surrogate_order = order;
    return cfg;
}

}  // namespace

TEST(Moments, ClosedFormAndQuadratureAgreeWithHandIntegrals)
{
    for (auto kind : {Micromodulus::Kind::Constant, Micromodulus::Kind::Triangular}) {
        const auto mu = make(kind, 0.7);
        for (unsigned p = 0; p <= 10; ++p) {
            const double expected = p % 2 ? 0.0 : hand_moment(kind, 1.5, 0.7, p);
            EXPECT_NEAR(raw_moment(mu, p), expected, 1e-14) << p;
            EXPECT_NEAR(raw_moment_quadrature(mu, p), expected, 1e-13) << p;
        }
        EXPECT_DOUBLE_EQ(moment(mu, 2), raw_moment(mu, 4));
        EXPECT_THROW(moment(mu, 3), ValidationError);
    }
}

TEST(Moments, SurrogateCoefficientsAreScaledMoments)
{
    const auto mu = make(Micromodulus::Kind::Triangular, 0.3);
    const auto s = local_surrogate(mu, 4);
    EXPECT_DOUBLE_EQ(s.coefficient(2), raw_moment(mu, 4) / 2);
    EXPECT_DOUBLE_EQ(s.coefficient(4), raw_moment(mu, 6) / 24);
    EXPECT_THROW(local_surrogate(mu, 3), ValidationError);
}

TEST(Operator, ActsOnPolynomialsThroughItsMoments)
{
    const auto mu = make(Micromodulus::Kind::Constant, 1.0);
    const Grid1D g(-2, 2, 8001, Boundary::Neumann0);
    const std::vector<std::size_t> centre = {3500, 4000, 4500};
    const auto constant = apply_nonlocal_at(Field::constant(g, 3.0), mu, centre);
    const auto linear = apply_nonlocal_at(Field::sample(g, [](double x) { return 2 * x - 1; }), mu, centre);
    const auto cubic = apply_nonlocal_at(Field::sample(g, [](double x) { return x * x * x; }), mu, {4000});
    const auto square = apply_nonlocal_at(Field::sample(g, [](double x) { return x * x; }), mu, centre);
    for (std::size_t i = 0; i < centre.size(); ++i) {
        EXPECT_LT(std::abs(constant[i]), 1e-13);
        EXPECT_LT(std::abs(linear[i]), 1e-13);
        EXPECT_NEAR(square[i], hand_moment(Micromodulus::Kind::Constant, 1.5, 1.0, 4), 1e-6);
    }
    EXPECT_LT(std::abs(cubic[0]), 1e-13);
}

TEST(Operator, RejectsPeriodicGridsAndUnresolvedHorizons)
{
    const auto mu = make(Micromodulus::Kind::Constant, 0.1);
    EXPECT_THROW(apply_nonlocal_1d(Field::zeros(Grid1D(0, 1, 101, Boundary::Periodic)), mu), ValidationError);
    EXPECT_THROW(apply_nonlocal_1d(Field::zeros(Grid1D(0, 1, 11, Boundary::Neumann0)), mu), ValidationError);
    EXPECT_NO_THROW(apply_nonlocal_1d(Field::zeros(Grid1D(0, 1, 21, Boundary::Neumann0)), mu));
    Micromodulus bad = mu;
    bad.delta = -1;
    EXPECT_THROW(bad.validate(), ValidationError);
}

TEST(Study, SecondOrderSurrogateConvergesQuadratically)
{
    const auto r = convergence_study(sine_study(2));
    ASSERT_EQ(r.rows.size(), 3u);
    EXPECT_GE(r.observed_order, 1.8);
    EXPECT_LE(r.observed_order, 2.2);
    for (const auto& row : r.rows) EXPECT_TRUE(std::isfinite(row.boundary_error));
}

TEST(Study, FourthOrderSurrogateConvergesQuarticly)
{
    const auto r = convergence_study(sine_study(4));
    EXPECT_GE(r.observed_order, 3.6);
    EXPECT_LE(r.observed_order, 4.4);
}

TEST(Study, RejectsBadHorizonLists)
{
    auto cfg = sine_study(2);
    cfg.deltas = {0.1, 0.2};
    EXPECT_THROW(convergence_study(cfg), ValidationError);
    cfg = sine_study(3);
    EXPECT_THROW(convergence_study(cfg), ValidationError);
    EXPECT_NEAR(fitted_order({1, 2, 4}, {3, 12, 48}), 2.0, 1e-14);
}

TEST(Tensor, IsotropicFourthMomentMatchesSphericalAverages)
{
    for (auto kind : {Micromodulus::Kind::Constant, Micromodulus::Kind::Triangular}) {
        const auto mu = make(kind, 0.4);
        const auto m = moment_tensor_3d(mu);
        // Sphere averages of n_x^4 and n_x^2 n_y^2 are 1/5 and 1/15.
        const double radial = kind == Micromodulus::Kind::Constant ? 1.5 * std::pow(0.4, 7) / 7
                                                                   : 1.5 * std::pow(0.4, 7) / 56;
        EXPECT_NEAR(radial_moment(mu, 6), radial, 1e-15);
        const double xxxx = 0.5 * 4 * oracle::pi / 5 * radial;
        EXPECT_NEAR(m.xxxx / xxxx, 1.0, 1e-10);
        EXPECT_NEAR(m.xxxx / m.xxyy, 3.0, 1e-8);
        EXPECT_NEAR(m.xyxy, m.xxyy, 1e-12 * m.xxxx);
        EXPECT_LE(m.isotropy_deviation, 1e-10);
        EXPECT_LE(m.symmetry_deviation, 1e-12);
        EXPECT_NEAR(m.c, m.xxyy, 1e-12 * m.xxxx);
        EXPECT_NEAR(m.mu, m.lambda_lame, 1e-12 * m.mu);
        EXPECT_NEAR(m.mu, 0.6 * m.bulk, 1e-12 * m.mu);
        EXPECT_NEAR(m.at(0, 0, 1, 1), m.at(1, 0, 1, 0), 1e-12 * m.xxxx);
        EXPECT_LT(std::abs(m.at(0, 0, 0, 1)), 1e-12 * m.xxxx);
    }
}
