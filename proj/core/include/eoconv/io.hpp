#pragma once

#include <iosfwd>
#include <string>

#include "eoconv/coupling.hpp"
#include "eoconv/fitlab.hpp"

// Plain-text import/export for measurement traces and field profiles.
//
// Trace files:
//   # eoconv trace
//   # kind: optical-reflection | microwave-reflection | crossing
//   # x: <label>
//   # y: <label>
//   <x> <y> [<y2>]          (whitespace separated, one sample per line)
//
// Profile files:
//   # eoconv profile
//   # r0 <m> dr <m> nr <count>
//   # z0 <m> dz <m> nz <count>
//   # columns: r z re im
//   <r> <z> <re> <im>       (z fastest, nr*nz rows)
//
// Parse failures throw ParseError carrying the 1-based line number.

namespace eoconv {

[[nodiscard]] SpectrumTrace parse_trace(std::istream& in, const std::string& origin);
[[nodiscard]] SpectrumTrace read_trace(const std::string& path);
void write_trace(std::ostream& out, const SpectrumTrace& trace);
void write_trace(const std::string& path, const SpectrumTrace& trace);

[[nodiscard]] FieldProfile parse_profile(std::istream& in, const std::string& origin);
[[nodiscard]] FieldProfile read_profile(const std::string& path);
void write_profile(std::ostream& out, const FieldProfile& profile);
void write_profile(const std::string& path, const FieldProfile& profile);

} // namespace eoconv
