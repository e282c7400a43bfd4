#pragma once

#include <cmath>

#include "spinrelax/spinrelax.hpp"

namespace fixtures {

// Default proton run: H_z = 1e4 Oe, H_1 = 1e2 Oe, delta = 0.033 per metre.
inline spinrelax::CouplingParams default_coupling() { return spinrelax::RunConfig{}.coupling(); }
inline spinrelax::EvolutionParams default_params() { return spinrelax::RunConfig{}.evolution(); }

// Independently recomputed (30-digit arithmetic) at the default parameters.
inline constexpr double gyromagnetic = 1.7590671e-13;          // MeV/T
inline constexpr double omega0 = 1.7590671e-13;                // MeV
inline constexpr double delta = 6.5117903532e-15;              // MeV
inline constexpr double b_ratio = 729.733009516109;            // (omega0/delta)^2
inline constexpr double gamma = 1.18796709294465e-16;          // MeV
inline constexpr double relaxation_seconds = 2.77032908070067e-6;
inline constexpr double larmor_megahertz = 42.5340532423448;
inline constexpr double half_line_mass = 0.988222045602712;    // Lorentzian mass on [0, inf)
inline constexpr double half_line_shift = -2.58918539912927e-20;  // MeV
inline constexpr double small_time_non_markovian = -1.96227557679419e-7;

inline double rel(double x, double ref) { return std::abs(x - ref) / std::abs(ref); }

}  // namespace fixtures
