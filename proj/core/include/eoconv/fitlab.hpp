#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "eoconv/errors.hpp"
#include "eoconv/modes.hpp"

// Measurement-trace models and fitters: reflection dips for the optical and
// microwave ports, and the two-branch avoided-crossing trace that calibrates
// the mode ladder.  Traces live in instrument units (Hz, degree C, linear
// reflection); reports carry both the raw fit parameters and the derived
// physics quantities.

namespace eoconv {

enum class TraceKind : std::uint8_t { OpticalReflection, MicrowaveReflection, Crossing };

[[nodiscard]] std::string_view to_string(TraceKind kind);
[[nodiscard]] TraceKind trace_kind_from_string(std::string_view text);

struct SpectrumTrace {
    TraceKind kind = TraceKind::OpticalReflection;
    std::string x_label; // e.g. "frequency_hz" or "temperature_c"
    std::string y_label; // e.g. "reflection" or "frequency_hz"
    std::vector<double> x;
    std::vector<double> y;
    std::vector<double> y2; // second branch (crossing traces); empty otherwise

    [[nodiscard]] bool has_second_branch() const { return !y2.empty(); }
    void validate() const;
};

struct FitValue {
    std::string name;
    double value = 0.0;
    double sigma = 0.0; // 1-sigma uncertainty; 0 when not estimated
};

struct FitReport {
    TraceKind kind = TraceKind::OpticalReflection;
    std::vector<FitValue> params;  // raw fit parameters in trace units
    std::vector<FitValue> derived; // physics quantities computed from them
    double residual_rms = 0.0;
    int iterations = 0;
    std::vector<std::string> assumptions;
    std::vector<std::string> warnings;

    [[nodiscard]] const FitValue* find(std::string_view name) const;
    // Value of a named entry (params and derived both searched); throws
    // DomainError when absent.
    [[nodiscard]] double value(std::string_view name) const;
};

// Power reflection of a single optical resonance probed in reflection with
// spatial mode matching `mode_matching`:
//   R(omega) = 1 - mode_matching * 4 g g' / ((omega - omega0)^2 + (g + g')^2),
// all arguments angular [rad/s].
[[nodiscard]] double optical_reflection(double omega, double omega0, double gamma,
                                        double gamma_prime, double mode_matching);

// Complex amplitude reflection of the microwave port, r = 1 - 2 gamma / Gamma
// with Gamma = -i(omega - omega0) + gamma + gamma'.
[[nodiscard]] std::complex<double> microwave_reflection(const MicrowaveMode& mode,
                                                        double omega_drive);

// Total phase excursion of the reflection across the resonance [rad]:
// below pi for an undercoupled port, a full 2 pi when overcoupled.
[[nodiscard]] double reflection_phase_excursion(const MicrowaveMode& mode);

enum class CouplingSide : std::uint8_t { Undercoupled, Overcoupled };

// How to split the fitted total linewidth into coupling and intrinsic parts.
// A single reflection magnitude cannot decide the split by itself, so the
// caller declares the extra knowledge; the report records it.
struct LinewidthSplit {
    enum class Rule : std::uint8_t {
        TotalOnly,          // report only the total linewidth
        CriticallyCoupled,  // gamma == gamma'; dip contrast gives mode matching
        KnownModeMatching,  // optical dip with known mode matching
        DipContrast,        // unit mode matching (microwave port)
    };
    Rule rule = Rule::TotalOnly;
    double mode_matching = 1.0;                        // for KnownModeMatching
    CouplingSide side = CouplingSide::Undercoupled;    // which root to take
};

// Fit a reflection dip (optical or microwave trace).  Raw parameters:
// center_hz, hwhm_hz, depth, baseline.  Derived: fwhm_hz, loaded_q and,
// when the split rule allows, gamma_hz / gamma_prime_hz (half-width
// convention, ordinary Hz).  Throws IllConditioned when the dip does not
// rise above three times the trace noise.
[[nodiscard]] FitReport fit_lorentzian(const SpectrumTrace& trace,
                                       const LinewidthSplit& split = {});

// Fit the avoided-crossing branch trace (x temperature [C], y frequency
// [Hz], optional second branch).  Raw parameters: bare-mode anchors and
// slopes plus the coupling rate.  Derived: kappa_hz, min_splitting_hz,
// crossing_temperature_c, slope_ratio.  Adds an unresolved-crossing warning
// when the fitted splitting is below three times the residual noise.
[[nodiscard]] FitReport fit_avoided_crossing(const SpectrumTrace& trace);

} // namespace eoconv
