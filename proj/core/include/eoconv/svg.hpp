#pragma once

#include <string>

#include "eoconv/harness.hpp"

namespace eoconv {

// Line chart of a sweep table: first column on x, remaining numeric columns
// as series (up to six).  Switches the y axis to log10 when every plotted
// value is positive and the dynamic range exceeds three decades.  Pure
// rendering of the table — never a data source.
[[nodiscard]] std::string render_sweep_svg(const SweepTable& table,
                                           const std::string& title);

} // namespace eoconv
