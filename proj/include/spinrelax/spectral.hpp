#pragma once

// Complex-eigenvalue content of the driven spin-1/2 problem as scalar
// numerics: the decay width gamma of the |-1/2> state, the transition rate
// W(omega), the principal-value energy renormalization, and the
// epsilon-regularized collision-operator element whose epsilon -> 0 limit is
// -2i gamma.

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "spinrelax/lineshape.hpp"
#include "spinrelax/quadrature.hpp"
#include "spinrelax/units.hpp"

namespace spinrelax {

/// Particle, rotating-field amplitude H1 [T] and drive lineshape.
struct CouplingParams {
    ParticleSpec particle;
    double h1 = 0.0;  // T
    LorentzianLine line;

    /// Builds the coupling for a static field H_z [T]; the line is centred on
    /// the Larmor frequency.
    static CouplingParams from_fields(const ParticleSpec& p, double hz_tesla, double h1_tesla,
                                      double delta) {
        CouplingParams c{p, h1_tesla, LorentzianLine{larmor_frequency(p, hz_tesla), delta}};
        c.validate();
        return c;
    }

    void validate() const {
        particle.validate();
        line.validate();
        if (!(h1 >= 0.0) || !std::isfinite(h1)) throw std::invalid_argument("H1 must be non-negative and finite");
    }

    double gyromagnetic() const { return gyromagnetic_ratio(particle); }

    /// H1 << H_z is where the perturbative results hold.
    std::optional<std::string> weak_field_warning() const {
        const double hz = line.omega0 / gyromagnetic();
        if (h1 > 0.1 * hz) {
            std::ostringstream os;
            os << "H1 = " << h1 << " T exceeds 0.1 * H_z = " << 0.1 * hz
               << " T; the weak-coupling results may not apply";
            return os.str();
        }
        return std::nullopt;
    }
};

/// (gamma_p H1 / 2)^2 [MeV^2], the squared coupling entering every integral.
inline double coupling_squared(const CouplingParams& c) {
    const double half = 0.5 * c.gyromagnetic() * c.h1;
    return half * half;
}

namespace detail {
// pi gamma_p^2 H1^2 f(omega); decay width and rate are fixed multiples of it.
inline double rate_core(const CouplingParams& c, double omega) {
    const double gh = c.gyromagnetic() * c.h1;
    return std::numbers::pi * gh * gh * density(c.line, omega);
}
}  // namespace detail

/// gamma_{-1/2} = (1/4) pi gamma_p^2 H1^2 f(omega0) [MeV].
inline double decay_width(const CouplingParams& c) {
    c.validate();
    return 0.25 * detail::rate_core(c, c.line.omega0);
}

/// W(omega) = (1/2) pi gamma_p^2 H1^2 f(omega) [MeV]; W(omega0) == 2 gamma.
inline double transition_rate(const CouplingParams& c, double omega) {
    c.validate();
    return 0.5 * detail::rate_core(c, omega);
}

enum class LowerLimit { minus_infinity, zero };

/// Renormalization E-bar - E of the decaying level:
/// -(gamma_p H1 / 2)^2 PV int f(w) / (w - omega0) dw over [lower, inf).
inline double energy_shift_pv(const CouplingParams& c, LowerLimit lower) {
    c.validate();
    const auto& line = c.line;
    const double w0 = line.omega0;
    const double d = line.delta;
    if (lower == LowerLimit::zero && !(w0 > 0.0))
        throw std::invalid_argument("energy_shift_pv: line centre must be positive for the [0, inf) domain");

    // Pairs u and -u around the pole cancel the 1/u singularity.
    auto paired = [&](double u) { return (density(line, w0 + u) - density(line, w0 - u)) / u; };
    const quad::Tolerance tol{1e-12, 1e-14 / d};

    double pv = 0.0;
    if (lower == LowerLimit::minus_infinity) {
        const std::array<double, 4> pts{0.0, d, 10.0 * d, INFINITY};
        pv = quad::integrate(paired, pts, tol).value;
    } else {
        std::vector<double> pts{0.0};
        for (double u = d; u < w0; u *= 4.0) pts.push_back(u);
        pts.push_back(w0);
        pv = quad::integrate(paired, pts, tol).value;
        // Unpaired remainder: omega in [2 omega0, inf).
        auto unpaired = [&](double u) { return density(line, w0 + u) / u; };
        const std::array<double, 3> tail{w0, std::max(2.0 * w0, w0 + 10.0 * d), INFINITY};
        pv += quad::integrate(unpaired, tail, tol).value;
    }
    return -coupling_squared(c) * pv;
}

/// (gamma_p H1/2)^2 int f(w) [1/(w - w0 + i eps) - 1/(w - w0 - i eps)] dw over
/// the real line. Tends to -2i gamma as eps -> 0+.
inline std::complex<double> collision_element(const CouplingParams& c, double epsilon) {
    c.validate();
    if (!(epsilon > 0.0) || !std::isfinite(epsilon))
        throw std::invalid_argument("collision_element: epsilon must be positive");
    const auto& line = c.line;
    const double w0 = line.omega0;
    using namespace std::complex_literals;
    auto integrand = [&](double w) -> std::complex<double> {
        const double x = w - w0;
        return density(line, w) * (1.0 / (x + 1i * epsilon) - 1.0 / (x - 1i * epsilon));
    };

    // Grade the mesh toward the pole on the scale min(eps, delta)/8.
    const double fine = std::min(epsilon, line.delta) / 8.0;
    const double coarse = 1e3 * std::max(epsilon, line.delta);
    std::vector<double> offsets;
    for (double s = fine; s < coarse; s *= 4.0) offsets.push_back(s);
    std::vector<double> pts{-INFINITY};
    for (auto it = offsets.rbegin(); it != offsets.rend(); ++it) pts.push_back(w0 - *it);
    pts.push_back(w0);
    for (double s : offsets) pts.push_back(w0 + s);
    pts.push_back(INFINITY);

    const auto r = quad::integrate(integrand, pts, quad::Tolerance{1e-12, 0.0});
    return coupling_squared(c) * r.value;
}

/// Richardson extrapolation of collision_element over eps = delta/10, /100, /1000.
inline std::complex<double> collision_element_limit(const CouplingParams& c) {
    c.validate();
    std::array<std::complex<double>, 3> seq;
    double eps = c.line.delta / 10.0;
    for (auto& v : seq) {
        v = collision_element(c, eps);
        eps /= 10.0;
    }
    return quad::richardson<std::complex<double>>(seq, 10.0);
}

/// Z = E-bar - i gamma, in physical terms.
struct SpectralResult {
    double gamma = 0.0;         // MeV
    double rate_w = 0.0;        // MeV, W at resonance
    double energy_shift = 0.0;  // MeV, E-bar - E
};

inline SpectralResult spectral_result(const CouplingParams& c, LowerLimit lower) {
    c.validate();
    const double core = detail::rate_core(c, c.line.omega0);
    return {0.25 * core, 0.5 * core, energy_shift_pv(c, lower)};
}

}  // namespace spinrelax
