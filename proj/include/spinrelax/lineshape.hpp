#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace spinrelax {

/// Lorentzian spectral density of the exciting field,
/// f(w) = (delta/pi) / (delta^2 + (w - omega0)^2), normalized on the real line.
/// delta is the half-width (half the full width Delta).
struct LorentzianLine {
    double omega0 = 0.0;  // MeV, line centre (Larmor frequency)
    double delta = 1.0;   // MeV, half-width

    void validate() const {
        if (!std::isfinite(omega0)) throw std::invalid_argument("line centre must be finite");
        if (!(delta > 0.0) || !std::isfinite(delta))
            throw std::invalid_argument("line half-width must be positive and finite");
    }

    /// (omega0 / delta)^2
    double b() const { return (omega0 / delta) * (omega0 / delta); }

    friend bool operator==(const LorentzianLine&, const LorentzianLine&) = default;
};

/// f(omega) [MeV^-1].
inline double density(const LorentzianLine& line, double omega) {
    const double x = omega - line.omega0;
    return (line.delta / std::numbers::pi) / (line.delta * line.delta + x * x);
}

/// Integral of f over [a, b]; either end may be infinite.
inline double mass_between(const LorentzianLine& line, double a, double b) {
    line.validate();
    if (std::isnan(a) || std::isnan(b)) throw std::invalid_argument("mass_between: NaN limit");
    if (a > b) throw std::invalid_argument("mass_between: lower limit exceeds upper limit");
    // atan(+-inf) = +-pi/2, so infinite limits need no special case.
    return (std::atan((b - line.omega0) / line.delta) - std::atan((a - line.omega0) / line.delta)) /
           std::numbers::pi;
}

}  // namespace spinrelax
