#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "eoconv/errors.hpp"
#include "eoconv/modes.hpp"

// Temperature-dependent mode ladder around the pump, including avoided
// crossings between whispering-gallery families with different thermal
// slopes.  The asymmetry between the upper and lower free spectral range
// selects which sideband is resonant.
//
// This module works in ordinary frequency [Hz] and degrees Celsius: its
// quantities are spectrometer-facing.  Conversion to angular units happens
// where a ladder feeds the converter system.

namespace eoconv {

struct BareMode {
    double nu_ref = 0.0;   // frequency at the reference temperature [Hz]
    double slope = 0.0;    // thermal tuning dnu/dT [Hz/K]
    double t_ref_c = 0.0;  // reference temperature [degree C]
    Polarization polarization = Polarization::TE;

    [[nodiscard]] double frequency_at(double t_c) const {
        return nu_ref + slope * (t_c - t_ref_c);
    }
};

enum class BranchKind : std::uint8_t { TeLike, TmLike };

struct HybridPair {
    double upper = 0.0; // [Hz]
    double lower = 0.0; // [Hz]
};

// Two bare modes coupled with rate kappa; eigenfrequencies repel by at least
// 2*kappa at the degeneracy point.
struct CrossingModel {
    BareMode mode_a;
    BareMode mode_b;
    double kappa = 0.0; // coupling rate [Hz]

    void validate() const {
        if (kappa < 0.0) throw DomainError("crossing coupling rate must be >= 0");
        if (mode_a.polarization == mode_b.polarization)
            throw DomainError("crossing modes must have distinct polarizations for "
                              "branch selection");
    }
};

// Hybridized eigenfrequencies mean +/- sqrt(kappa^2 + delta^2/4) at
// temperature t_c, with delta the bare-mode frequency difference.
[[nodiscard]] HybridPair hybridized_frequencies(const CrossingModel& model, double t_c);

// Temperature where the bare modes are degenerate.  Throws DegenerateSlopes
// if the thermal slopes are (nearly) equal.
[[nodiscard]] double crossing_temperature(const CrossingModel& model);

// Frequency of the continuous eigenbranch that coincides with the selected
// bare mode's asymptote at temperatures far below the crossing.
[[nodiscard]] double tracked_branch(const CrossingModel& model, double t_c,
                                    BranchKind which);

// One azimuthal slot of the ladder: either an unperturbed mode or a mode
// hybridized with a crossing partner.
struct LadderEntry {
    std::int64_t m = 0;
    std::variant<BareMode, CrossingModel> model;
};

struct ModeLadder {
    std::vector<LadderEntry> entries; // sorted by m
    std::int64_t pump_m = 0;          // the entry carrying the pump
    Polarization family = Polarization::TE;

    void validate() const;

    // Tracked frequency of entry m at temperature t_c [Hz].
    [[nodiscard]] double frequency_at(std::int64_t m, double t_c) const;
};

struct FsrPair {
    double fsr_plus = 0.0;  // nu(m+1) - nu(m) [Hz]
    double fsr_minus = 0.0; // nu(m) - nu(m-1) [Hz]

    [[nodiscard]] double asymmetry() const { return fsr_plus - fsr_minus; }
};

[[nodiscard]] FsrPair fsr_pair(const ModeLadder& ladder, double t_c);

struct TemperatureSearchResult {
    double temperature_c = 0.0;       // first root in the bracket
    std::vector<double> all_roots_c;  // every root found, ascending
};

// Find temperatures in [t_lo_c, t_hi_c] where fsr_plus - fsr_minus equals
// target_asymmetry [Hz].  Brackets by scanning, then bisects each sign change
// to 0.1 mK (and further, within floating-point limits, until the asymmetry
// mismatch is below 1 kHz where the function's slope allows).
[[nodiscard]] TemperatureSearchResult find_operating_temperature(
    const ModeLadder& ladder, double target_asymmetry, double t_lo_c, double t_hi_c);

} // namespace eoconv
