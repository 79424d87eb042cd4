#pragma once

#include <complex>

#include "eoconv/detuning.hpp"
#include "eoconv/modes.hpp"

// Steady-state coupled-mode theory of the converter.
//
// The interaction couples four intracavity amplitudes (pump a, sidebands b+,
// b-, microwave c) through sum- and difference-frequency terms of strength g.
// Two evaluation paths are provided:
//
//  * sideband_powers_undepleted: closed-form perturbative result, both drives
//    undepleted.
//  * solve_steady_state: damped Newton iteration on the coupled amplitude
//    equations; models pump depletion and, optionally, the conversion
//    back-action on the microwave amplitude.

namespace eoconv {

struct ConversionResult {
    double zeta_plus = 0.0;  // P+ / (P_pump * P_mw) [1/W]
    double zeta_minus = 0.0; // P- / (P_pump * P_mw) [1/W]
    double p_plus = 0.0;     // generated sum-frequency sideband power [W]
    double p_minus = 0.0;    // generated difference-frequency sideband power [W]
    double eta_plus = 0.0;   // photon-number conversion efficiency, mw -> sb(+)
    double eta_minus = 0.0;  // photon-number conversion efficiency, mw -> sb(-)

    // Set when an efficiency exceeds 1; values are reported unclipped.
    bool perturbative_regime_exceeded = false;
};

struct SteadyState {
    std::complex<double> a;       // pump amplitude, |a|^2 = photons
    std::complex<double> b_plus;  // sum-frequency sideband amplitude
    std::complex<double> b_minus; // difference-frequency sideband amplitude
    std::complex<double> c;       // microwave amplitude
    bool converged = false;
    int iterations = 0;
    double residual = 0.0; // final relative residual
};

struct SolveOptions {
    bool deplete = true;       // false: pump and microwave pinned at linear values
    double tolerance = 1e-12;  // relative residual target
    int max_iterations = 200;
    // Include the conversion terms in the microwave equation.  Off by
    // default: the microwave signal is treated as undepleted, which is the
    // regime the perturbative formula describes (the correction scales with
    // the pump cooperativity, not with signal power).
    bool microwave_back_action = false;
};

// Perturbative sideband powers and efficiencies, both drives undepleted.
// All four detuning denominators are evaluated at the configured drives.
[[nodiscard]] ConversionResult sideband_powers_undepleted(const ConverterSystem& sys);

// Steady-state amplitudes of the coupled system.  Throws NoConvergence if the
// residual does not reach the tolerance within the iteration cap.
[[nodiscard]] SteadyState solve_steady_state(const ConverterSystem& sys,
                                             const SolveOptions& opts = {});

// Output powers and efficiencies from solved amplitudes:
// P_out = 2*gamma*hbar*omega*|b|^2 per sideband.
[[nodiscard]] ConversionResult output_powers(const ConverterSystem& sys,
                                             const SteadyState& state);

// Photon-flux bookkeeping of a steady state.  For each driven mode the flux
// absorbed from its drive splits into dissipation and conversion; the pump
// conversion flux equals the sum of the generated sideband fluxes, and the
// microwave conversion flux equals their difference (sum-frequency generation
// consumes a microwave photon, difference-frequency generation emits one).
struct FluxAudit {
    double pump_absorbed = 0.0;    // photon flux absorbed from the pump drive [1/s]
    double pump_dissipated = 0.0;  // flux lost to pump-mode dissipation [1/s]
    double pump_converted = 0.0;   // pump_absorbed - pump_dissipated [1/s]
    double sb_plus_flux = 0.0;     // total sideband(+) emission flux [1/s]
    double sb_minus_flux = 0.0;    // total sideband(-) emission flux [1/s]
    double mw_absorbed = 0.0;      // photon flux absorbed from the microwave drive [1/s]
    double mw_dissipated = 0.0;    // flux lost to microwave dissipation [1/s]
    double mw_converted = 0.0;     // mw_absorbed - mw_dissipated [1/s]
};

[[nodiscard]] FluxAudit flux_audit(const ConverterSystem& sys, const SteadyState& state);

// Sideband suppression ratio S = delta_minus^2 / (gamma + gamma')^2 + 1 for a
// lower sideband detuned by delta_minus [rad/s] while pump and upper sideband
// are resonant.
[[nodiscard]] double suppression(double delta_minus, double gamma, double gamma_prime);

// Extra pump power required by the pump-detuning suppression scheme relative
// to a symmetry-broken free spectral range, at equal suppression S:
// penalty = (S - 1)/4 + 1.
[[nodiscard]] double detuning_scheme_pump_penalty(double suppression_ratio);

// Steady-state intracavity photon number of a single driven mode:
// n = (2*gamma*P_in/(hbar*omega0)) / (detuning^2 + (gamma + gamma')^2).
[[nodiscard]] double intracavity_photon_number(const OpticalMode& mode, double p_in,
                                               double detuning);

// Pump cooperativity G0 = g^2 * n_pump / (|Gamma_+| * |Gamma_Omega|).
// G0 ~ 1 marks the onset of efficient conversion.
[[nodiscard]] double cooperativity(const ConverterSystem& sys);

// Photon-number efficiency from measured powers:
// eta = (Omega/omega_plus) * (P_plus / P_mw).
[[nodiscard]] double measured_efficiency(double p_plus, double p_mw, double mw_drive,
                                         double omega_plus);

// Invert the perturbative formula for g from a measured linear slope
// P_+/P_mw [1/W] at the system's configured drives and pump power.
[[nodiscard]] double infer_g_from_slope(double slope_per_watt,
                                        const ConverterSystem& sys);

// A counter-propagating pump addresses only one of the two degenerate
// microwave rotation senses; the equivalent co-propagating rate is sqrt(2)
// larger than the measured effective rate.
[[nodiscard]] inline double counterpropagating_corrected_g(double g_eff) {
    return g_eff * 1.4142135623730951;
}

} // namespace eoconv
