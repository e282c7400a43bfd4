#pragma once

// Independent evaluations of the non-Markovian term, used to check the
// closed form built from A(t), B(t):
//   * contour: the rotated integral int_0^inf e^{-xi} g(xi) dxi done by
//     complex adaptive quadrature, without the rational Re/Im split;
//   * direct: the original oscillatory integral
//       2 (gamma_p H1/2)^2 Re int_0^Lambda f(w) e^{-i(w-w0)t} / (w - w0 - i eps)^2 dw
//     at finite eps, extrapolated to eps -> 0.
//
// Rotating [0, inf) onto the negative imaginary axis passes over the
// Lorentzian pole at w0 - i delta. Its residue contributes
// -(2 gamma / delta) e^{-delta t} (delta / (delta + eps))^2 to the direct
// integral and is absent from the contour form; lorentzian_pole_residue()
// returns it so the two can be compared on equal terms.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "spinrelax/evolution.hpp"
#include "spinrelax/quadrature.hpp"

namespace spinrelax::oracle {

struct OracleConfig {
    double epsilon = 0.0;        // MeV, regularizer of the direct integral
    double cutoff_lambda = 0.0;  // MeV, upper limit of the direct integral
    double tolerance = 1e-10;    // relative quadrature target

    static OracleConfig defaults_for(const EvolutionParams& p) {
        return {p.delta / 100.0, p.omega0 + 1e4 * p.delta, 1e-10};
    }

    void validate(const EvolutionParams& p) const {
        if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw std::invalid_argument("oracle: epsilon must be positive");
        if (!(cutoff_lambda > p.omega0 + 100.0 * p.delta) || !std::isfinite(cutoff_lambda))
            throw std::invalid_argument("oracle: cutoff must exceed omega0 + 100 delta");
        if (!(tolerance > 0.0 && tolerance <= 1e-4)) throw std::invalid_argument("oracle: tolerance must lie in (0, 1e-4]");
    }
};

/// e^{-xi} / [(1 + b z^2) z^2], z = 1 + i xi / a.
inline std::complex<double> contour_integrand(double xi, double a, double b) {
    if (!(a > 0.0)) throw std::invalid_argument("contour_integrand: a must be positive");
    if (!(b >= 0.0)) throw std::invalid_argument("contour_integrand: b must be non-negative");
    if (!(xi >= 0.0)) throw std::invalid_argument("contour_integrand: xi must be non-negative");
    const std::complex<double> z{1.0, xi / a};
    const auto z2 = z * z;
    const auto den = (1.0 + b * z2) * z2;
    if (std::abs(den) < 1e-12) throw std::domain_error("contour_integrand: denominator vanishes on the ray");
    return std::exp(-xi) / den;
}

/// Smallest |(1 + b z^2) z^2| over xi in [0, xi_max], sampled.
inline double min_denominator_on_ray(double a, double b, double xi_max = 1e3, int samples = 100000) {
    double best = INFINITY;
    for (int i = 0; i <= samples; ++i) {
        const double xi = xi_max * i / samples;
        const std::complex<double> z{1.0, xi / a};
        best = std::min(best, std::abs((1.0 + b * z * z) * z * z));
    }
    return best;
}

/// int_0^inf contour_integrand dxi by complex adaptive quadrature.
inline quad::Result<std::complex<double>> contour_integral(double a, double b, double tolerance) {
    std::vector<double> pts{0.0};
    if (b > 0.0) pts.push_back(a / std::sqrt(b));
    pts.push_back(std::max(a, pts.back() * 2.0));
    if (pts.back() < 40.0) pts.push_back(40.0);
    pts.push_back(INFINITY);
    std::sort(pts.begin(), pts.end() - 1);
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return quad::integrate([&](double xi) { return contour_integrand(xi, a, b); }, pts,
                           quad::Tolerance{tolerance, 0.0});
}

/// Non-Markovian term from the rotated contour:
/// (gamma_p H1/2)^2 [-i e^{i w0 t} / (pi delta w0^2 t) * int + c.c.].
inline double non_markovian_contour(const EvolutionParams& p, double t, const OracleConfig& cfg) {
    p.validate();
    if (!(t > 0.0)) throw std::invalid_argument("non_markovian_contour: t must be positive");
    if (p.gamma == 0.0) return 0.0;
    const double a = p.omega0 * t;
    const auto g = contour_integral(a, p.b(), cfg.tolerance).value;
    using namespace std::complex_literals;
    const std::complex<double> x =
        -1i * std::exp(1i * a) * g / (std::numbers::pi * p.delta * p.omega0 * p.omega0 * t);
    // (gamma_p H1 / 2)^2 = gamma delta
    const std::complex<double> sum = p.gamma * p.delta * (x + std::conj(x));
    if (std::abs(sum.imag()) > cfg.tolerance * std::abs(sum.real()) + 1e-300)
        throw std::logic_error("non_markovian_contour: result is not real");
    return sum.real();
}

/// Contribution of the Lorentzian pole at w0 - i delta to the direct integral.
inline double lorentzian_pole_residue(const EvolutionParams& p, double t, double epsilon) {
    p.validate();
    const double r = p.delta / (p.delta + epsilon);
    return -2.0 * p.gamma / p.delta * std::exp(-p.delta * t) * r * r;
}

struct DirectResult {
    double value = 0.0;
    double error = 0.0;
    bool converged = false;
};

/// Direct evaluation at the configured finite epsilon.
///
/// Within a window |w - w0| < h around the double pole the integrand
/// F(w) / (w - w0 - i eps)^2, F(w) = f(w) e^{-i(w - w0)t}, is split as
/// [F - F(w0) - F'(w0)(w - w0)] / (...)^2, which is bounded and integrated
/// numerically, plus the two polynomial terms, integrated in closed form.
/// Without the split the quadrature loses all accuracy once eps << delta.
inline DirectResult non_markovian_direct_at(const EvolutionParams& p, double t, const OracleConfig& cfg) {
    p.validate();
    cfg.validate(p);
    if (!(t > 0.0)) throw std::invalid_argument("non_markovian_direct: t must be positive");
    if (p.gamma == 0.0) return {0.0, 0.0, true};

    const double w0 = p.omega0;
    const double d = p.delta;
    const double eps = cfg.epsilon;
    const double lambda = cfg.cutoff_lambda;
    const LorentzianLine line{w0, d};
    const double half_period = std::numbers::pi / t;
    const double h = std::min({half_period, d, 0.5 * w0});
    const double f0 = 1.0 / (std::numbers::pi * d);
    using namespace std::complex_literals;

    auto integrand = [&](double w) -> std::complex<double> {
        const double x = w - w0;
        const std::complex<double> den = x - 1i * eps;
        if (std::abs(x) >= h) return density(line, w) * std::exp(-1i * (x * t)) / (den * den);
        // F - F0 - F1 x = f (e^{-i theta} - 1 + i theta) + (f - f0)(1 - i theta), theta = x t
        const double th = x * t;
        const double s = std::sin(0.5 * th);
        const double th_minus_sin =
            std::abs(th) < 1e-2 ? th * th * th / 6.0 * (1.0 - th * th / 20.0) : th - std::sin(th);
        const std::complex<double> e_rem{-2.0 * s * s, th_minus_sin};
        const double f_minus_f0 = -x * x / (std::numbers::pi * d * (d * d + x * x));
        return (density(line, w) * e_rem + f_minus_f0 * (1.0 - 1i * th)) / (den * den);
    };

    // Closed-form window terms: f0 int dx/(x - i eps)^2 - i t f0 int x dx/(x - i eps)^2 over [-h, h].
    const double i0 = -2.0 * h / (h * h + eps * eps);
    const std::complex<double> i1 = 1i * (std::numbers::pi - 2.0 * std::atan(eps / h)) + 1i * eps * i0;
    const std::complex<double> window = f0 * i0 - 1i * t * f0 * i1;

    // Breakpoints: graded toward the pole from eps/8 inside the window, then
    // panels of half an oscillation period across [0, Lambda].
    std::vector<double> offsets;
    for (double o = eps / 8.0; o < h; o *= 4.0) offsets.push_back(o);
    offsets.push_back(h);
    std::vector<double> pts{0.0};
    for (double w = w0 - h - half_period; w > 0.0; w -= half_period) pts.push_back(w);
    for (double o : offsets) pts.push_back(w0 - o);
    pts.push_back(w0);
    for (double o : offsets) pts.push_back(w0 + o);
    for (double w = w0 + h + half_period; w < lambda; w += half_period) pts.push_back(w);
    pts.push_back(lambda);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    pts.erase(std::remove_if(pts.begin(), pts.end(), [&](double w) { return w < 0.0 || w > lambda; }), pts.end());

    // Absolute target: a fraction of the closed form's late-time magnitude.
    const double scale = 2.0 / (std::numbers::pi * d * w0 * w0 * t * (1.0 + p.b()));
    const auto r = quad::integrate(integrand, pts, quad::Tolerance{1e-14, 1e-5 * scale},
                                   std::max<std::size_t>(8 * pts.size(), 200000));
    const double pref = 2.0 * p.gamma * d;
    return {pref * (r.value + window).real(), pref * r.error, r.converged};
}

/// Direct evaluation extrapolated over eps, eps/10, eps/100.
inline double non_markovian_direct(const EvolutionParams& p, double t, const OracleConfig& cfg) {
    std::array<double, 3> seq;
    OracleConfig c = cfg;
    for (auto& v : seq) {
        v = non_markovian_direct_at(p, t, c).value;
        c.epsilon /= 10.0;
    }
    return quad::richardson<double>(seq, 10.0);
}

/// Bound on the quarter-arc integral |int_{gamma_R} e^{-izt} F(z) dz|,
/// F(z) = f(z) / (z - w0)^2, as int |e^{-izt} F(z)| |dz| over the arc from R to -iR.
inline double arc_decay_check(double radius, const EvolutionParams& p, double t) {
    p.validate();
    if (!(radius > p.omega0 + 10.0 * p.delta) || !std::isfinite(radius))
        throw std::invalid_argument("arc_decay_check: radius must exceed omega0 + 10 delta");
    if (!(t > 0.0)) throw std::invalid_argument("arc_decay_check: t must be positive");
    const double w0 = p.omega0;
    const double d = p.delta;
    auto modulus = [&](double theta) {
        const std::complex<double> z = std::polar(radius, theta);
        const auto x = z - w0;
        const auto f = (d / std::numbers::pi) / (d * d + x * x);
        return std::exp(t * z.imag()) * std::abs(f / (x * x)) * radius;
    };
    // The damping confines the integrand to |theta| <~ 1/(t R); grade toward 0.
    std::vector<double> pts{-std::numbers::pi / 2.0};
    std::vector<double> graded;
    for (double s = 1.0 / (t * radius); s < 1.0; s *= 4.0) graded.push_back(-s);
    std::reverse(graded.begin(), graded.end());
    pts.insert(pts.end(), graded.begin(), graded.end());
    pts.push_back(0.0);
    return quad::integrate(modulus, pts, quad::Tolerance{1e-10, 0.0}).value;
}

}  // namespace spinrelax::oracle
