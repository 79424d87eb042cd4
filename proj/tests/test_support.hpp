#pragma once

#include <cmath>

#include "eoconv/constants.hpp"
#include "eoconv/modes.hpp"

namespace eoconv::testing {

// Triply resonant working point used across the tests: critically coupled
// optical family at 193.5 THz (346 kHz half-widths), microwave mode at
// 8.941 GHz (3.6 / 16.2 MHz), g = 2pi x 7.43 Hz, 0.42 mW pump, 1 uW signal.
inline ConverterSystem reference_system() {
    ConverterSystem sys;
    sys.pump.omega0 = hz_to_angular(193.5e12);
    sys.pump.gamma = hz_to_angular(346e3);
    sys.pump.gamma_prime = hz_to_angular(346e3);
    sys.pump.m = 20820;
    sys.pump.n = 2.14;

    sys.mw.omega0 = hz_to_angular(8.941e9);
    sys.mw.gamma = hz_to_angular(3.6e6);
    sys.mw.gamma_prime = hz_to_angular(16.2e6);
    sys.mw.m = 1;
    sys.mw.n = std::sqrt(28.0);

    sys.sb_plus = sys.pump;
    sys.sb_plus.omega0 = sys.pump.omega0 + sys.mw.omega0;
    sys.sb_plus.m = sys.pump.m + 1;
    sys.sb_minus = sys.pump;
    sys.sb_minus.omega0 = sys.pump.omega0 - sys.mw.omega0;
    sys.sb_minus.m = sys.pump.m - 1;

    sys.g = hz_to_angular(7.43);
    sys.pump_power = 0.42e-3;
    sys.mw_power = 1e-6;
    sys.pump_drive = sys.pump.omega0;
    sys.mw_drive = sys.mw.omega0;
    return sys;
}

[[nodiscard]] inline double rel_diff(double a, double b) {
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

} // namespace eoconv::testing
