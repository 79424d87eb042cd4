#pragma once

#include <numbers>

// Physical constants (SI) and frequency-unit helpers.
//
// Convention used throughout the library: every frequency or rate held in a
// domain type is angular [rad/s].  Ordinary frequency [Hz] appears only at
// I/O boundaries (scenario files, trace files, CSV/JSON reports).

namespace eoconv {

inline constexpr double kHbar = 1.054571817e-34;     // reduced Planck constant [J s]
inline constexpr double kEps0 = 8.8541878128e-12;    // vacuum permittivity [F/m]
inline constexpr double kSpeedOfLight = 299792458.0; // [m/s]
inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Ordinary frequency [Hz] -> angular frequency [rad/s].
[[nodiscard]] constexpr double hz_to_angular(double f_hz) { return kTwoPi * f_hz; }

// Angular frequency [rad/s] -> ordinary frequency [Hz].
[[nodiscard]] constexpr double angular_to_hz(double w_rad_s) { return w_rad_s / kTwoPi; }

} // namespace eoconv
