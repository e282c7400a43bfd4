#pragma once

// Physical constants and unit conversions.
//
// Everything inside the library runs in natural units (hbar = c = 1):
// energies and angular frequencies in MeV, times in MeV^-1, magnetic
// fields in tesla. Laboratory units (Oe, s, m^-1, Hz) appear only at the
// I/O boundary, through the conversion functions below.

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>

namespace spinrelax {

namespace constants {

/// Nuclear magneton mu_N [MeV/T].
inline constexpr double nuclear_magneton = 3.15245e-14;
/// Reduced Planck constant [MeV s].
inline constexpr double hbar = 6.582119569e-22;
/// hbar * c [MeV m].
inline constexpr double hbar_c = 1.973269804e-13;
/// 1 Oe expressed in tesla (Oe taken equal to G).
inline constexpr double tesla_per_oersted = 1.0e-4;

inline constexpr double proton_mass = 938.27;  // MeV
inline constexpr double proton_g_factor = 5.58;

}  // namespace constants

/// The spin-1/2 carrier: rest mass, g-factor and sign of the charge.
struct ParticleSpec {
    double mass = constants::proton_mass;  // MeV
    double g_factor = constants::proton_g_factor;
    int charge_sign = +1;

    static ParticleSpec proton() { return {}; }

    void validate() const {
        if (!(mass > 0.0) || !std::isfinite(mass))
            throw std::invalid_argument("particle mass must be positive and finite");
        if (!(g_factor >= 0.0) || !std::isfinite(g_factor))
            throw std::invalid_argument("particle g-factor must be non-negative and finite");
        if (charge_sign != 1 && charge_sign != -1)
            throw std::invalid_argument("particle charge sign must be +1 or -1");
    }

    friend bool operator==(const ParticleSpec&, const ParticleSpec&) = default;
};

/// Looks up a named particle preset. Only "proton" is known.
inline ParticleSpec particle_preset(std::string_view name) {
    if (name == "proton") return ParticleSpec::proton();
    throw std::invalid_argument("unknown particle preset '" + std::string(name) + "'");
}

enum class Dimension {
    energy,            // MeV
    inverse_energy,    // MeV^-1 (time)
    magnetic_field,    // T
    moment_per_field,  // MeV/T
    dimensionless,
};

inline const char* to_string(Dimension d) {
    switch (d) {
        case Dimension::energy: return "MeV";
        case Dimension::inverse_energy: return "MeV^-1";
        case Dimension::magnetic_field: return "T";
        case Dimension::moment_per_field: return "MeV/T";
        case Dimension::dimensionless: return "1";
    }
    return "?";
}

/// A value tagged with its dimension. Addition and comparison across
/// dimensions throw.
class Quantity {
public:
    constexpr Quantity(double value, Dimension dim) : value_(value), dim_(dim) {}

    constexpr double value() const { return value_; }
    constexpr Dimension dimension() const { return dim_; }

    /// Returns the value, checking that it carries the expected dimension.
    double in(Dimension expected) const {
        require_same(dim_, expected);
        return value_;
    }

    friend Quantity operator+(Quantity a, Quantity b) {
        require_same(a.dim_, b.dim_);
        return {a.value_ + b.value_, a.dim_};
    }
    friend Quantity operator-(Quantity a, Quantity b) {
        require_same(a.dim_, b.dim_);
        return {a.value_ - b.value_, a.dim_};
    }
    friend Quantity operator*(double k, Quantity q) { return {k * q.value_, q.dim_}; }
    friend Quantity operator*(Quantity q, double k) { return {k * q.value_, q.dim_}; }
    friend Quantity operator/(Quantity q, double k) { return {q.value_ / k, q.dim_}; }

    friend bool operator<(Quantity a, Quantity b) {
        require_same(a.dim_, b.dim_);
        return a.value_ < b.value_;
    }
    friend bool operator==(Quantity a, Quantity b) {
        require_same(a.dim_, b.dim_);
        return a.value_ == b.value_;
    }

private:
    static void require_same(Dimension a, Dimension b) {
        if (a != b)
            throw std::invalid_argument(std::string("dimension mismatch: ") + to_string(a) +
                                        " vs " + to_string(b));
    }

    double value_;
    Dimension dim_;
};

inline Quantity energy(double mev) { return {mev, Dimension::energy}; }
inline Quantity inverse_energy(double per_mev) { return {per_mev, Dimension::inverse_energy}; }
inline Quantity magnetic_field(double tesla) { return {tesla, Dimension::magnetic_field}; }

// Conversions. Each has an exact inverse up to one rounding.

inline double oersted_to_tesla(double oe) { return oe * constants::tesla_per_oersted; }
inline double tesla_to_oersted(double t) { return t / constants::tesla_per_oersted; }

inline double inverse_meter_to_mev(double per_m) { return per_m * constants::hbar_c; }
inline double mev_to_inverse_meter(double mev) { return mev / constants::hbar_c; }

inline double mev_inverse_to_seconds(double t) { return t * constants::hbar; }
inline double seconds_to_mev_inverse(double s) { return s / constants::hbar; }

/// Angular frequency in MeV to cyclic frequency in MHz.
inline double mev_to_megahertz(double omega) {
    return omega / (2.0 * std::numbers::pi * constants::hbar) * 1e-6;
}

/// gamma_p = g e / 2m, i.e. g * mu_N scaled by m_proton / m [MeV/T].
/// The magnitude is returned; charge_sign only fixes which level lies lower.
inline double gyromagnetic_ratio(const ParticleSpec& p) {
    p.validate();
    return p.g_factor * constants::nuclear_magneton * (constants::proton_mass / p.mass);
}

/// Level splitting omega_0 = gamma_p H_z [MeV], with H_z in tesla.
inline double larmor_frequency(const ParticleSpec& p, double hz_tesla) {
    if (!(hz_tesla >= 0.0)) throw std::invalid_argument("H_z must be non-negative");
    return gyromagnetic_ratio(p) * hz_tesla;
}

inline Quantity larmor_frequency(const ParticleSpec& p, Quantity hz) {
    return energy(larmor_frequency(p, hz.in(Dimension::magnetic_field)));
}

}  // namespace spinrelax
