#pragma once

// Time evolution of the population <-1/2| rho(t) |-1/2> of the initially
// occupied level: a Markovian exponential exp(-2 gamma t) plus the
// non-Markovian correction
//
//   kappa / (omega0^2 t) * (A(t) sin(omega0 t) + B(t) cos(omega0 t)),
//   kappa = gamma_p^2 H1^2 / (2 pi delta) = 2 gamma / pi,
//
// with A, B the real and imaginary parts of
//   G(a, b) = int_0^inf e^{-xi} g(xi) dxi,
//   g(xi)   = 1 / [(1 + b (1 + i xi/a)^2) (1 + i xi/a)^2],
//   a = omega0 t,  b = (omega0 / delta)^2.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <exception>
#include <numbers>
#include <span>
#include <stdexcept>
#include <thread>
#include <vector>

#include "spinrelax/quadrature.hpp"
#include "spinrelax/spectral.hpp"

namespace spinrelax {

struct EvolutionParams {
    double omega0 = 1.0;  // MeV
    double delta = 1.0;   // MeV
    double gamma = 0.0;   // MeV

    static EvolutionParams from_coupling(const CouplingParams& c) {
        c.validate();
        EvolutionParams p{c.line.omega0, c.line.delta, decay_width(c)};
        p.validate();
        // The prefactor computed straight from the fields must agree with 2 gamma / pi.
        const double gh = c.gyromagnetic() * c.h1;
        const double direct = gh * gh / (2.0 * p.delta * std::numbers::pi);
        if (std::abs(direct - p.kappa()) > 1e-12 * std::max(std::abs(direct), std::abs(p.kappa())))
            throw std::logic_error("non-Markovian prefactor inconsistent with decay width");
        return p;
    }

    void validate() const {
        if (!(omega0 > 0.0) || !std::isfinite(omega0)) throw std::invalid_argument("omega0 must be positive");
        if (!(delta > 0.0) || !std::isfinite(delta)) throw std::invalid_argument("delta must be positive");
        if (!(gamma >= 0.0) || !std::isfinite(gamma)) throw std::invalid_argument("gamma must be non-negative");
    }

    /// (omega0 / delta)^2
    double b() const { return (omega0 / delta) * (omega0 / delta); }
    /// gamma_p^2 H1^2 / (2 pi delta)
    double kappa() const { return 2.0 * gamma / std::numbers::pi; }
    /// Below this time the non-Markovian term is defined as 0.
    double t_floor() const { return 1e-6 / omega0; }
};

struct EvolutionPoint {
    double t = 0.0;  // MeV^-1
    double markovian = 1.0;
    double non_markovian = 0.0;
    double total = 1.0;

    friend bool operator==(const EvolutionPoint&, const EvolutionPoint&) = default;
};

/// exp(-2 gamma t).
inline double markovian_term(const EvolutionParams& p, double t) {
    if (!(t >= 0.0)) throw std::invalid_argument("markovian_term: t must be non-negative");
    return std::exp(-2.0 * p.gamma * t);
}

/// Test hook: relative error injected into one coefficient of D(xi).
struct FaultInjection {
    double d_poly_xi4 = 0.0;
};

/// D(xi) = a^8 (1+b)^2 + a^6 (2 + b(2 + 4b)) xi^2 + a^4 (1 + b(-2 + 6b)) xi^4
///         + a^2 b (-2 + 4b) xi^6 + b^2 xi^8,
/// equal to a^8 |(1 + b z^2) z^2|^2 with z = 1 + i xi/a.
inline double d_poly(double xi, double a, double b, FaultInjection fault = {}) {
    const double x2 = xi * xi;
    const double a2 = a * a;
    const double a4 = a2 * a2;
    const double c0 = a4 * a4 * (1.0 + b) * (1.0 + b);
    const double c2 = a4 * a2 * (2.0 + b * (2.0 + 4.0 * b));
    const double c4 = a4 * (1.0 + b * (-2.0 + 6.0 * b)) * (1.0 + fault.d_poly_xi4);
    const double c6 = a2 * b * (-2.0 + 4.0 * b);
    const double c8 = b * b;
    return c0 + x2 * (c2 + x2 * (c4 + x2 * (c6 + x2 * c8)));
}

/// Re g and Im g written as the rational functions over D(xi).
struct RationalParts {
    double re = 0.0;
    double im = 0.0;
};

inline RationalParts rational_parts(double xi, double a, double b, FaultInjection fault = {}) {
    const double x2 = xi * xi;
    const double a2 = a * a;
    const double a4 = a2 * a2;
    const double d = d_poly(xi, a, b, fault);
    const double re = a4 * (a4 * (1.0 + b) - a2 * (1.0 + 6.0 * b) * x2 + b * x2 * x2);
    const double im = xi * (-a4 * a2 * a * (2.0 + 4.0 * b) + 4.0 * a4 * a * b * x2);
    return {re / d, im / d};
}

enum class QuadratureRoute { automatic, laguerre, adaptive };

struct Coefficients {
    double a_coeff = 0.0;  // A(t)
    double b_coeff = 0.0;  // B(t)
    QuadratureRoute route = QuadratureRoute::automatic;
    int order = 0;  // Gauss order (laguerre route) or interval count (adaptive)
    bool converged = false;
};

struct CoefficientOptions {
    QuadratureRoute route = QuadratureRoute::automatic;
    FaultInjection fault{};
};

namespace detail {

inline std::complex<double> parts_at(double xi, double a, double b, FaultInjection fault) {
    const auto r = rational_parts(xi, a, b, fault);
    return {r.re, r.im};
}

// Laguerre route. For a >= 1 a plain Gauss-Laguerre sum. For a < 1 the
// rational factor has structure on the scale a near the origin, which the
// Laguerre nodes cannot see; there [0, 1] is covered by Gauss-Legendre panels
// graded geometrically from the scale a, and [1, inf) by a shifted
// Gauss-Laguerre rule. The order doubles 16 -> 512 until two successive
// estimates agree to 1e-10.
inline std::complex<double> laguerre_sum(int n, double a, double b, FaultInjection fault) {
    std::complex<double> sum{};
    const auto& lag = quad::gauss_laguerre(n);
    if (a >= 1.0) {
        for (std::size_t i = 0; i < lag.nodes.size(); ++i)
            sum += lag.weights[i] * parts_at(lag.nodes[i], a, b, fault);
        return sum;
    }
    std::vector<double> edges{0.0};
    for (double e = 0.5 * a; e < 1.0; e *= 2.0) edges.push_back(e);
    edges.push_back(1.0);
    const auto& leg = quad::gauss_legendre(n);
    for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
        const double mid = 0.5 * (edges[k] + edges[k + 1]);
        const double half = 0.5 * (edges[k + 1] - edges[k]);
        std::complex<double> panel{};
        for (std::size_t i = 0; i < leg.nodes.size(); ++i) {
            const double xi = mid + half * leg.nodes[i];
            panel += leg.weights[i] * std::exp(-xi) * parts_at(xi, a, b, fault);
        }
        sum += half * panel;
    }
    std::complex<double> tail{};
    for (std::size_t i = 0; i < lag.nodes.size(); ++i)
        tail += lag.weights[i] * parts_at(1.0 + lag.nodes[i], a, b, fault);
    return sum + std::exp(-1.0) * tail;
}

inline Coefficients laguerre_coefficients(double a, double b, FaultInjection fault) {
    constexpr double agreement = 1e-10;
    std::complex<double> prev = laguerre_sum(16, a, b, fault);
    Coefficients out{prev.real(), prev.imag(), QuadratureRoute::laguerre, 16, false};
    for (int n = 32; n <= 512; n *= 2) {
        const auto cur = laguerre_sum(n, a, b, fault);
        out = {cur.real(), cur.imag(), QuadratureRoute::laguerre, n, false};
        if (std::abs(cur - prev) <= agreement * std::abs(cur)) {
            out.converged = true;
            break;
        }
        prev = cur;
    }
    return out;
}

// Adaptive Gauss-Kronrod on [0, 40]; e^{-40} < 5e-18 bounds the dropped tail.
inline Coefficients adaptive_coefficients(double a, double b, FaultInjection fault) {
    constexpr double upper = 40.0;
    std::vector<double> pts{0.0};
    if (b > 0.0 && a / std::sqrt(b) < upper) pts.push_back(a / std::sqrt(b));
    for (double s = 0.5 * a; s < upper; s *= 2.0)
        if (s > pts.back()) pts.push_back(s);
    pts.push_back(upper);
    auto f = [&](double xi) { return std::exp(-xi) * parts_at(xi, a, b, fault); };
    const auto r = quad::integrate(f, pts, quad::Tolerance{1e-13, 0.0});
    return {r.value.real(), r.value.imag(), QuadratureRoute::adaptive, static_cast<int>(r.intervals),
            r.converged};
}

}  // namespace detail

/// A(a, b) and B(a, b) for dimensionless a = omega0 t > 0 and b >= 0.
inline Coefficients coefficients(double a, double b, CoefficientOptions opts = {}) {
    if (!(a > 0.0) || !std::isfinite(a)) throw std::invalid_argument("coefficients: a must be positive");
    if (!(b >= 0.0) || !std::isfinite(b)) throw std::invalid_argument("coefficients: b must be non-negative");
    switch (opts.route) {
        case QuadratureRoute::laguerre: return detail::laguerre_coefficients(a, b, opts.fault);
        case QuadratureRoute::adaptive: return detail::adaptive_coefficients(a, b, opts.fault);
        case QuadratureRoute::automatic: break;
    }
    auto c = detail::laguerre_coefficients(a, b, opts.fault);
    if (!c.converged) c = detail::adaptive_coefficients(a, b, opts.fault);
    return c;
}

inline Coefficients coefficients(const EvolutionParams& p, double t, CoefficientOptions opts = {}) {
    p.validate();
    if (!(t > 0.0)) throw std::invalid_argument("coefficients: t must be positive");
    return coefficients(p.omega0 * t, p.b(), opts);
}

inline double coefficient_A(const EvolutionParams& p, double t) { return coefficients(p, t).a_coeff; }
inline double coefficient_B(const EvolutionParams& p, double t) { return coefficients(p, t).b_coeff; }

/// kappa / (omega0^2 t) (A sin(omega0 t) + B cos(omega0 t)); 0 for t <= t_floor.
inline double non_markovian_term(const EvolutionParams& p, double t, CoefficientOptions opts = {}) {
    p.validate();
    if (!(t >= 0.0)) throw std::invalid_argument("non_markovian_term: t must be non-negative");
    if (t <= p.t_floor() || p.gamma == 0.0) return 0.0;
    const double a = p.omega0 * t;
    const auto c = coefficients(a, p.b(), opts);
    return p.kappa() / (p.omega0 * a) * (c.a_coeff * std::sin(a) + c.b_coeff * std::cos(a));
}

inline EvolutionPoint evolution_point(const EvolutionParams& p, double t, CoefficientOptions opts = {}) {
    EvolutionPoint pt;
    pt.t = t;
    pt.markovian = markovian_term(p, t);
    pt.non_markovian = non_markovian_term(p, t, opts);
    pt.total = pt.markovian + pt.non_markovian;
    return pt;
}

/// <-1/2| rho(t) |-1/2>; exactly 1 at t = 0.
inline double density_element(const EvolutionParams& p, double t) { return evolution_point(p, t).total; }

/// Evaluates every grid time (sorted ascending, non-negative). Points are
/// independent, so the result does not depend on the thread count.
inline std::vector<EvolutionPoint> evolve_grid(const EvolutionParams& p, std::span<const double> grid,
                                               unsigned threads = 0, CoefficientOptions opts = {}) {
    p.validate();
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!(grid[i] >= 0.0)) throw std::invalid_argument("evolve_grid: times must be non-negative");
        if (i > 0 && grid[i] < grid[i - 1]) throw std::invalid_argument("evolve_grid: times must be sorted");
    }
    std::vector<EvolutionPoint> out(grid.size());
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(grid.size(), 1)));
    if (threads <= 1) {
        for (std::size_t i = 0; i < grid.size(); ++i) out[i] = evolution_point(p, grid[i], opts);
        return out;
    }
    std::vector<std::jthread> workers;
    std::vector<std::exception_ptr> errors(threads);
    for (unsigned w = 0; w < threads; ++w) {
        workers.emplace_back([&, w] {
            try {
                for (std::size_t i = w; i < grid.size(); i += threads) out[i] = evolution_point(p, grid[i], opts);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    workers.clear();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return out;
}

/// n uniform points on [0, t_max].
inline std::vector<double> uniform_grid(double t_max, std::size_t n) {
    if (n < 2) throw std::invalid_argument("uniform_grid: need at least two points");
    if (!(t_max >= 0.0) || !std::isfinite(t_max)) throw std::invalid_argument("uniform_grid: bad t_max");
    std::vector<double> g(n);
    for (std::size_t i = 0; i < n; ++i) g[i] = t_max * static_cast<double>(i) / static_cast<double>(n - 1);
    return g;
}

}  // namespace spinrelax
