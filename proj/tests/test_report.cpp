#include <gtest/gtest.h>

#include <charconv>
#include <clocale>
#include <random>
#include <sstream>

#include "fixtures.hpp"

using namespace spinrelax;

TEST(Report, ShortestRoundTrips) {
    std::mt19937_64 rng(61);
    std::uniform_real_distribution<double> u(-300.0, 300.0);
    for (int i = 0; i < 1000; ++i) {
        const double x = std::pow(10.0, u(rng)) * (i % 2 ? -1.0 : 1.0);
        const auto s = report::shortest(x);
        double back = 0.0;
        std::from_chars(s.data(), s.data() + s.size(), back);
        EXPECT_EQ(back, x);
    }
    EXPECT_EQ(report::shortest(INFINITY), "inf");
}

TEST(Report, CsvHeaderAndLineEndings) {
    const auto p = fixtures::default_params();
    const auto pts = evolve_grid(p, uniform_grid(1.0 / p.gamma, 5));
    std::ostringstream os;
    report::write_csv(os, pts);
    const auto text = os.str();
    EXPECT_EQ(text.rfind("t_seconds,t_inverse_mev,markovian,non_markovian,total\n", 0), 0u);
    EXPECT_EQ(text.find('\r'), std::string::npos);
    EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 6);
    EXPECT_NE(text.find("\n0,0,1,0,1\n"), std::string::npos);
}

TEST(Report, CsvIgnoresLocale) {
    const auto p = fixtures::default_params();
    const auto pts = evolve_grid(p, uniform_grid(1.0 / p.gamma, 3));
    std::ostringstream a;
    report::write_csv(a, pts);
    const char* prev = std::setlocale(LC_ALL, "de_DE.UTF-8");
    std::ostringstream b;
    report::write_csv(b, pts);
    if (prev) std::setlocale(LC_ALL, "C");
    EXPECT_EQ(a.str(), b.str());
}

TEST(Report, RatesAtDefaults) {
    const auto r = report::compute_rates(fixtures::default_coupling());
    EXPECT_LT(fixtures::rel(r.b, fixtures::b_ratio), 1e-9);
    EXPECT_LT(fixtures::rel(r.relaxation_s, fixtures::relaxation_seconds), 1e-9);
    EXPECT_NEAR(r.omega0_mhz, 42.5, 0.2);
    EXPECT_TRUE(r.warning.empty());
    std::ostringstream os;
    report::write_rates(os, r);
    EXPECT_NE(os.str().find("MHz"), std::string::npos);
}

TEST(Report, ZeroH1GivesInfiniteRelaxation) {
    auto c = fixtures::default_coupling();
    c.h1 = 0.0;
    const auto r = report::compute_rates(c);
    EXPECT_EQ(r.gamma, 0.0);
    EXPECT_TRUE(std::isinf(r.relaxation_s));
    std::ostringstream os;
    report::write_rates(os, r);
    EXPECT_NE(os.str().find("inf s"), std::string::npos);
}

TEST(Report, SvgHasTwoPanels) {
    const auto p = fixtures::default_params();
    const auto pts = evolve_grid(p, uniform_grid(5.0 / (2.0 * p.gamma), 50));
    const auto fine = evolve_grid(p, report::oscillation_window(p, 4, 16));
    std::ostringstream os;
    report::write_svg(os, report::markovian_series(pts), report::non_markovian_series(fine));
    const auto svg = os.str();
    std::size_t count = 0;
    for (auto pos = svg.find("<polyline"); pos != std::string::npos; pos = svg.find("<polyline", pos + 1)) ++count;
    EXPECT_EQ(count, 2u);
    EXPECT_NE(svg.find("t [s]"), std::string::npos);
    EXPECT_EQ(svg.rfind("</svg>\n"), svg.size() - 7);
}

TEST(Report, OscillationWindowResolvesLarmorPeriod) {
    const auto p = fixtures::default_params();
    const auto g = report::oscillation_window(p, 40, 32);
    ASSERT_EQ(g.size(), 40u * 32u + 1u);
    EXPECT_NEAR((g[1] - g[0]) * p.omega0, 2.0 * std::numbers::pi / 32.0, 1e-12);
}
