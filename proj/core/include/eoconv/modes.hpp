#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>

#include "eoconv/errors.hpp"

// Resonator mode descriptions for a triply resonant electro-optic converter:
// one pump mode, two optical sideband modes and one microwave mode, driven by
// a pump laser and a microwave tone.
//
// Rate convention: gamma and gamma_prime are amplitude decay half-widths
// [rad/s]; the loaded (FWHM) linewidth of a mode is 2*(gamma + gamma_prime).

namespace eoconv {

enum class Polarization : std::uint8_t { TE, TM };

[[nodiscard]] inline const char* to_string(Polarization p) {
    return p == Polarization::TE ? "TE" : "TM";
}

struct OpticalMode {
    double omega0 = 0.0;      // resonance frequency [rad/s]
    double gamma = 0.0;       // external (coupler) half-width [rad/s]
    double gamma_prime = 0.0; // intrinsic loss half-width [rad/s]
    std::int64_t m = 0;       // azimuthal mode number
    double n = 0.0;           // effective refractive index
    Polarization polarization = Polarization::TE;

    [[nodiscard]] double total_rate() const { return gamma + gamma_prime; }

    // Loaded quality factor omega0 / (2*(gamma + gamma')).
    [[nodiscard]] double loaded_q() const {
        if (total_rate() <= 0.0)
            throw ZeroLinewidth("optical mode has non-positive total linewidth");
        return omega0 / (2.0 * total_rate());
    }

    void validate(const std::string& label) const {
        if (!(omega0 > 0.0))
            throw DomainError(label + ": omega0 must be positive");
        if (gamma < 0.0 || !std::isfinite(gamma))
            throw DomainError(label + ": gamma must be >= 0");
        if (!(gamma_prime > 0.0))
            throw NonPositiveLinewidth(label + ": gamma_prime must be positive");
        if (!(total_rate() > 0.0))
            throw NonPositiveLinewidth(label + ": total linewidth must be positive");
        if (m <= 0)
            throw DomainError(label + ": azimuthal number must be positive");
        if (!(n > 0.0))
            throw DomainError(label + ": refractive index must be positive");
    }
};

// gamma == gamma' within relative tolerance 1e-9.
[[nodiscard]] inline bool is_critically_coupled(const OpticalMode& mode) {
    const double scale = std::max(std::abs(mode.gamma), std::abs(mode.gamma_prime));
    if (scale == 0.0) return true;
    return std::abs(mode.gamma - mode.gamma_prime) <= 1e-9 * scale;
}

struct MicrowaveMode {
    double omega0 = 0.0;      // resonance frequency [rad/s]
    double gamma = 0.0;       // external (pin coupler) half-width [rad/s]
    double gamma_prime = 0.0; // intrinsic loss half-width [rad/s]
    std::int64_t m = 1;       // azimuthal mode number
    double n = 0.0;           // microwave refractive index, sqrt(eps_r)

    // At most one of the two is stored; the other follows from the
    // single-photon field relation.  Both absent means the mode is used
    // only spectrally.
    std::optional<double> e_single_photon; // vacuum field amplitude [V/m]
    std::optional<double> mode_volume;     // normalization volume [m^3]

    [[nodiscard]] double total_rate() const { return gamma + gamma_prime; }

    [[nodiscard]] double loaded_q() const {
        if (total_rate() <= 0.0)
            throw ZeroLinewidth("microwave mode has non-positive total linewidth");
        return omega0 / (2.0 * total_rate());
    }

    [[nodiscard]] bool is_undercoupled() const { return gamma < gamma_prime; }

    void validate() const {
        if (!(omega0 > 0.0))
            throw DomainError("microwave mode: omega0 must be positive");
        if (gamma < 0.0 || !std::isfinite(gamma))
            throw DomainError("microwave mode: gamma must be >= 0");
        if (!(gamma_prime > 0.0))
            throw NonPositiveLinewidth("microwave mode: gamma_prime must be positive");
        if (m <= 0)
            throw DomainError("microwave mode: azimuthal number must be positive");
        if (e_single_photon && mode_volume)
            throw DomainError(
                "microwave mode: set e_single_photon or mode_volume, not both");
        if (e_single_photon && !(*e_single_photon > 0.0))
            throw DomainError("microwave mode: e_single_photon must be positive");
        if (mode_volume && !(*mode_volume > 0.0))
            throw DomainError("microwave mode: mode_volume must be positive");
    }
};

enum class Sideband : std::uint8_t { Plus, Minus };

// Full converter working point: three optical modes, the microwave mode,
// the vacuum coupling rate and the two drives.
struct ConverterSystem {
    OpticalMode pump;
    OpticalMode sb_plus;  // sum-frequency mode, m = pump.m + mw.m
    OpticalMode sb_minus; // difference-frequency mode, m = pump.m - mw.m
    MicrowaveMode mw;

    double g = 0.0;           // vacuum electro-optic coupling rate [rad/s]
    double pump_power = 0.0;  // optical pump power coupled into the resonator [W]
    double mw_power = 0.0;    // microwave signal power at the pin coupler [W]
    double pump_drive = 0.0;  // pump laser frequency [rad/s]
    double mw_drive = 0.0;    // microwave drive frequency [rad/s]

    // Spatial mode-matching of the pump input beam, applied to the input
    // photon flux only.  1 means the quoted pump power is fully matched.
    double pump_mode_matching = 1.0;

    [[nodiscard]] const OpticalMode& sideband(Sideband s) const {
        return s == Sideband::Plus ? sb_plus : sb_minus;
    }

    void validate() const {
        pump.validate("pump mode");
        sb_plus.validate("sideband(+) mode");
        sb_minus.validate("sideband(-) mode");
        mw.validate();
        if (sb_plus.m != pump.m + mw.m)
            throw DomainError("phase matching violated: sideband(+) azimuthal number "
                              "must equal pump.m + mw.m");
        if (sb_minus.m != pump.m - mw.m)
            throw DomainError("phase matching violated: sideband(-) azimuthal number "
                              "must equal pump.m - mw.m");
        if (!std::isfinite(g))
            throw DomainError("coupling rate g must be finite");
        if (pump_power < 0.0 || mw_power < 0.0)
            throw DomainError("drive powers must be >= 0");
        if (!(pump_drive > 0.0) || !(mw_drive > 0.0))
            throw DomainError("drive frequencies must be positive");
        if (!(pump_mode_matching >= 0.0) || pump_mode_matching > 1.0)
            throw DomainError("pump mode matching must lie in [0, 1]");
    }
};

} // namespace eoconv
