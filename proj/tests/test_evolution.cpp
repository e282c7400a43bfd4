#include <gtest/gtest.h>

#include <complex>
#include <random>

#include "fixtures.hpp"

using namespace spinrelax;

namespace {
std::complex<double> g_complex(double xi, double a, double b) {
    const std::complex<double> z{1.0, xi / a};
    return 1.0 / ((1.0 + b * z * z) * z * z);
}
}  // namespace

TEST(Evolution, DPolySpotValues) {
    EXPECT_DOUBLE_EQ(d_poly(1.0, 1.0, 0.0), 4.0);
    EXPECT_DOUBLE_EQ(d_poly(1.0, 1.0, 1.0), 20.0);
    EXPECT_DOUBLE_EQ(d_poly(0.0, 2.0, 3.0), std::pow(2.0, 8) * 16.0);
}

TEST(Evolution, DPolyIsDenominatorModulusSquared) {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int i = 0; i < 2000; ++i) {
        const double xi = std::pow(10.0, u(rng));
        const double a = std::pow(10.0, u(rng));
        const double b = i % 4 == 0 ? 0.0 : std::pow(10.0, u(rng));
        const std::complex<double> z{1.0, xi / a};
        const double ref = std::pow(a, 8) * std::norm((1.0 + b * z * z) * z * z);
        EXPECT_LT(fixtures::rel(d_poly(xi, a, b), ref), 1e-10);
        EXPECT_GT(d_poly(xi, a, b), 0.0);
    }
}

TEST(Evolution, RationalPartsSpotValue) {
    const auto r = rational_parts(1.0, 1.0, 0.0);
    EXPECT_NEAR(r.re, 0.0, 1e-16);
    EXPECT_DOUBLE_EQ(r.im, -0.5);
}

TEST(Evolution, RationalPartsMatchComplexArithmetic) {
    std::mt19937_64 rng(32);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 10000; ++i) {
        const double xi = 1e-4 * std::pow(1e6, u(rng));
        const double a = 1e-2 * std::pow(1e6, u(rng));
        const double b = i % 3 == 0 ? 0.0 : (i % 3 == 1 ? 729.0 + u(rng) : 1e-3 * std::pow(1e7, u(rng)));
        const auto g = g_complex(xi, a, b);
        const auto r = rational_parts(xi, a, b);
        EXPECT_LE(std::abs(r.re - g.real()), 1e-10 * std::abs(g));
        EXPECT_LE(std::abs(r.im - g.imag()), 1e-10 * std::abs(g));
    }
}

TEST(Evolution, FaultInjectionBreaksIdentity) {
    const FaultInjection fault{1e-3};
    const auto g = g_complex(3.0, 2.0, 5.0);
    const auto r = rational_parts(3.0, 2.0, 5.0, fault);
    EXPECT_GT(std::abs(r.re - g.real()) + std::abs(r.im - g.imag()), 1e-8 * std::abs(g));
}

// Pinned once by 1e-12 adaptive quadrature of the b = 0, a = 1 integrals.
TEST(Evolution, CoefficientsPinnedAtUnitA) {
    const auto c = coefficients(1.0, 0.0);
    EXPECT_NEAR(c.a_coeff, 0.343377961556427, 1e-12);
    EXPECT_NEAR(c.b_coeff, -0.378550375764187, 1e-12);
}

TEST(Evolution, CoefficientsPinnedAtDefaultB) {
    const auto c1 = coefficients(1.0, 729.0);
    EXPECT_LT(fixtures::rel(c1.a_coeff, 1.5003562145546e-4), 1e-10);
    EXPECT_LT(fixtures::rel(c1.b_coeff, -3.7035123577592e-4), 1e-10);
    const auto c2 = coefficients(0.01, 0.0);
    EXPECT_LT(fixtures::rel(c2.a_coeff, 4.0433858273767e-4), 1e-9);
    EXPECT_LT(fixtures::rel(c2.b_coeff, -9.847956078070e-3), 1e-10);
}

TEST(Evolution, CoefficientsAgainstHighPrecisionReference) {
    const double b = fixtures::b_ratio;
    const auto c10 = coefficients(10.0, b);
    EXPECT_LT(fixtures::rel(c10.a_coeff, 0.00116676242320002585), 1e-10);
    EXPECT_LT(fixtures::rel(c10.b_coeff, -0.000435547482365931488), 1e-10);
    const auto c01 = coefficients(0.1, b);
    EXPECT_LT(fixtures::rel(c01.a_coeff, 2.24038347855725112e-6), 1e-9);
    EXPECT_LT(fixtures::rel(c01.b_coeff, -4.54424086961289793e-5), 1e-10);
}

TEST(Evolution, LargeALimit) {
    for (double b : {0.0, 1.0, 729.0}) {
        const auto c = coefficients(1e6, b);
        EXPECT_LT(fixtures::rel(c.a_coeff, 1.0 / (1.0 + b)), 1e-5) << "b = " << b;
    }
}

TEST(Evolution, BNegativeWithoutLineWidthTerm) {
    for (double a : {0.01, 0.3, 1.0, 10.0, 1000.0}) EXPECT_LT(coefficients(a, 0.0).b_coeff, 0.0) << "a = " << a;
}

TEST(Evolution, LaguerreAndAdaptiveRoutesAgree) {
    for (double b : {0.0, 1.0, 729.0}) {
        for (int k = 0; k <= 24; ++k) {
            const double a = std::pow(10.0, -2.0 + 6.0 * k / 24.0);
            const auto x = coefficients(a, b, {QuadratureRoute::laguerre, {}});
            const auto y = coefficients(a, b, {QuadratureRoute::adaptive, {}});
            EXPECT_TRUE(x.converged);
            EXPECT_LE(std::hypot(x.a_coeff - y.a_coeff, x.b_coeff - y.b_coeff), 1e-8 * std::hypot(y.a_coeff, y.b_coeff))
                << "a = " << a << ", b = " << b;
        }
    }
}

TEST(Evolution, CoefficientsRejectNonPositiveTime) {
    const auto p = fixtures::default_params();
    EXPECT_THROW(coefficient_A(p, 0.0), std::invalid_argument);
    EXPECT_THROW(coefficient_B(p, -1.0), std::invalid_argument);
}

TEST(Evolution, MarkovianTerm) {
    const auto p = fixtures::default_params();
    EXPECT_EQ(markovian_term(p, 0.0), 1.0);
    EXPECT_NEAR(markovian_term(p, 1.0 / (2.0 * p.gamma)), std::exp(-1.0), 1e-15);
    EXPECT_NEAR(markovian_term(p, seconds_to_mev_inverse(2.77e-6)), std::exp(-1.0), 1e-3);
    EXPECT_THROW(markovian_term(p, -1.0), std::invalid_argument);
}

TEST(Evolution, MarkovianStrictlyDecreasing) {
    const auto p = fixtures::default_params();
    double prev = markovian_term(p, 0.0);
    for (int i = 1; i <= 1000; ++i) {
        const double cur = markovian_term(p, i * 1e-3 / p.gamma);
        EXPECT_LT(cur, prev);
        prev = cur;
    }
}

TEST(Evolution, PrefactorMatchesTwoGammaOverPi) {
    const auto p = fixtures::default_params();
    EXPECT_LT(fixtures::rel(p.kappa(), 2.0 * fixtures::gamma / std::numbers::pi), 1e-9);
    EXPECT_LT(fixtures::rel(p.b(), fixtures::b_ratio), 1e-9);
}

TEST(Evolution, InitialConditionExact) {
    const auto p = fixtures::default_params();
    EXPECT_EQ(density_element(p, 0.0), 1.0);
    const auto pt = evolution_point(p, 0.0);
    EXPECT_EQ(pt.non_markovian, 0.0);
    EXPECT_EQ(pt.markovian, 1.0);
}

TEST(Evolution, ZeroFloorBelowThreshold) {
    const auto p = fixtures::default_params();
    EXPECT_EQ(non_markovian_term(p, 0.5 * p.t_floor()), 0.0);
    EXPECT_EQ(non_markovian_term(p, p.t_floor()), 0.0);
}

// Independent 30-digit evaluation: the term tends to (2 gamma / (pi omega0)) Im K(b)
// with K(b) = int_0^inf ds / ((1 + b (1 + i s)^2) (1 + i s)^2), a finite non-zero value.
TEST(Evolution, SmallTimeLimitIsFinite) {
    const auto p = fixtures::default_params();
    for (double a : {1e-5, 1e-4}) {
        const double nm = non_markovian_term(p, a / p.omega0);
        EXPECT_LT(fixtures::rel(nm, fixtures::small_time_non_markovian), 1e-3) << "a = " << a;
    }
}

TEST(Evolution, LateTimeDecay) {
    const auto p = fixtures::default_params();
    EXPECT_LT(std::abs(density_element(p, 20.0 / (2.0 * p.gamma))), 1e-6);
}

TEST(Evolution, ZeroH1IsConstant) {
    auto c = fixtures::default_coupling();
    c.h1 = 0.0;
    const auto p = EvolutionParams::from_coupling(c);
    for (double t : {0.0, 1e10, 1e14, 1e18}) EXPECT_EQ(density_element(p, t), 1.0);
}

TEST(Evolution, GridEdgeCases) {
    const auto p = fixtures::default_params();
    EXPECT_TRUE(evolve_grid(p, {}).empty());
    const std::vector<double> zero{0.0};
    const auto one = evolve_grid(p, zero);
    ASSERT_EQ(one.size(), 1u);
    EXPECT_EQ(one[0], (EvolutionPoint{0.0, 1.0, 0.0, 1.0}));
    const std::vector<double> unsorted{0.0, 2.0, 1.0};
    EXPECT_THROW(evolve_grid(p, unsorted), std::invalid_argument);
    const std::vector<double> negative{-1.0, 0.0};
    EXPECT_THROW(evolve_grid(p, negative), std::invalid_argument);
}

TEST(Evolution, ParallelGridMatchesSequentialBitForBit) {
    const auto p = fixtures::default_params();
    const auto grid = uniform_grid(5.0 / (2.0 * p.gamma), 1000);
    const auto seq = evolve_grid(p, grid, 1);
    const auto par = evolve_grid(p, grid, 4);
    ASSERT_EQ(seq.size(), par.size());
    for (std::size_t i = 0; i < seq.size(); ++i) {
        EXPECT_EQ(seq[i], par[i]) << "index " << i;
        if (i % 97 == 0) {
            EXPECT_EQ(seq[i], evolution_point(p, grid[i])) << "index " << i;
        }
    }
}

TEST(Evolution, MarkovianDominatesOnDefaultGrid) {
    const auto p = fixtures::default_params();
    const auto pts = evolve_grid(p, uniform_grid(5.0 / (2.0 * p.gamma), 1000));
    double max_nm = 0.0;
    for (const auto& x : pts) max_nm = std::max(max_nm, std::abs(x.non_markovian));
    EXPECT_LT(max_nm, 1.0);
}

TEST(Evolution, ExtremaEnvelopeDecreases) {
    const auto p = fixtures::default_params();
    double prev = INFINITY;
    for (int k = 50; k <= 100; ++k) {
        const double cur = std::abs(non_markovian_term(p, (k + 0.5) * std::numbers::pi / p.omega0));
        EXPECT_LT(cur, prev) << "k = " << k;
        prev = cur;
    }
}

TEST(Evolution, FromCouplingPassesPrefactorCheck) {
    auto c = fixtures::default_coupling();
    EXPECT_NO_THROW(EvolutionParams::from_coupling(c));
}

TEST(Evolution, UniformGrid) {
    const auto g = uniform_grid(2.0, 5);
    ASSERT_EQ(g.size(), 5u);
    EXPECT_EQ(g.front(), 0.0);
    EXPECT_EQ(g.back(), 2.0);
    EXPECT_THROW(uniform_grid(1.0, 1), std::invalid_argument);
}
