#pragma once

#include <complex>

#include "eoconv/modes.hpp"

// Complex detuning denominators of the steady-state coupled-mode equations.
// Each combines a drive detuning with the mode's amplitude half-widths:
//
//   Gamma = -i*(drive detuning) + gamma + gamma'
//
// so |Gamma|^2 = detuning^2 + (gamma + gamma')^2 is minimized on resonance.

namespace eoconv {

using ComplexRate = std::complex<double>; // [rad/s]

namespace detail {
inline void require_positive_total(double total, const char* label) {
    if (!(total > 0.0)) throw NonPositiveLinewidth(label);
}
} // namespace detail

// Pump denominator Gamma_p = -i*(omega - omega_p) + gamma + gamma',
// evaluated at the pump drive frequency.
[[nodiscard]] inline ComplexRate gamma_p(const ConverterSystem& sys) {
    detail::require_positive_total(sys.pump.total_rate(),
                                   "pump mode has non-positive total linewidth");
    return {sys.pump.total_rate(), -(sys.pump_drive - sys.pump.omega0)};
}

// Sideband denominator Gamma_+/- = -i*(omega +/- Omega - omega_+/-) + gamma + gamma'.
// Uses the sideband mode's frequency and the pump mode's rates: nearby
// same-polarization modes are assumed to share their linewidths.
[[nodiscard]] inline ComplexRate gamma_sb(const ConverterSystem& sys, Sideband s) {
    detail::require_positive_total(sys.pump.total_rate(),
                                   "pump mode has non-positive total linewidth");
    const double sign = (s == Sideband::Plus) ? 1.0 : -1.0;
    const double detuning = sys.pump_drive + sign * sys.mw_drive - sys.sideband(s).omega0;
    return {sys.pump.total_rate(), -detuning};
}

// Microwave denominator Gamma_Omega = -i*(Omega - Omega_0) + gamma_mw + gamma_mw'.
[[nodiscard]] inline ComplexRate gamma_mw_total(const ConverterSystem& sys) {
    detail::require_positive_total(sys.mw.total_rate(),
                                   "microwave mode has non-positive total linewidth");
    return {sys.mw.total_rate(), -(sys.mw_drive - sys.mw.omega0)};
}

// Drive detunings [rad/s], positive when the drive sits above the resonance.
[[nodiscard]] inline double pump_detuning(const ConverterSystem& sys) {
    return sys.pump_drive - sys.pump.omega0;
}

[[nodiscard]] inline double mw_detuning(const ConverterSystem& sys) {
    return sys.mw_drive - sys.mw.omega0;
}

[[nodiscard]] inline double sideband_detuning(const ConverterSystem& sys, Sideband s) {
    const double sign = (s == Sideband::Plus) ? 1.0 : -1.0;
    return sys.pump_drive + sign * sys.mw_drive - sys.sideband(s).omega0;
}

} // namespace eoconv
