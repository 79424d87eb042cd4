#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "eoconv/dispersion.hpp"
#include "eoconv/modes.hpp"

// Scenario files describe one converter setup in an INI-style key = value
// format with [sections], full-line and trailing '#' comments, and a
// provenance tag per value ({paper}, {fitted} or {assumed}) inside the
// trailing comment.  Frequencies and rates are ordinary Hz in files (the
// half-width convention: fitted HWHM equals gamma + gamma' in Hz); powers are
// watts or dBm depending on the key suffix.

namespace eoconv {

enum class Provenance : std::uint8_t { Paper, Fitted, Assumed, Untagged };

[[nodiscard]] std::string_view to_string(Provenance provenance);

struct ScenarioValue {
    std::string raw;      // value text as written, trimmed
    double number = 0.0;  // parsed value when numeric
    bool is_number = false;
    Provenance provenance = Provenance::Untagged;
    std::size_t line = 0; // 1-based source line
};

struct ProvenanceCounts {
    int paper = 0;
    int fitted = 0;
    int assumed = 0;
    int untagged = 0;
};

struct Scenario {
    std::string origin;  // file path or label, for messages
    std::string name;    // [meta] name
    int version = 1;     // [meta] version
    std::map<std::string, std::map<std::string, ScenarioValue>> sections;

    [[nodiscard]] bool has(const std::string& section, const std::string& key) const;
    [[nodiscard]] const ScenarioValue* find(const std::string& section,
                                            const std::string& key) const;
    // Required numeric value; throws ParseError when absent or non-numeric.
    [[nodiscard]] double number(const std::string& section, const std::string& key) const;
    [[nodiscard]] double number_or(const std::string& section, const std::string& key,
                                   double fallback) const;
    [[nodiscard]] std::string text_or(const std::string& section, const std::string& key,
                                      const std::string& fallback) const;

    [[nodiscard]] ProvenanceCounts provenance_counts() const;

    // Normalised listing (sections and keys sorted, tags appended); the hash
    // is FNV-1a 64 over this text, so reordering a file does not change it
    // but any value or tag edit does.
    [[nodiscard]] std::string canonical_text() const;
    [[nodiscard]] std::uint64_t hash() const;
    [[nodiscard]] std::string hash_hex() const;
};

[[nodiscard]] Scenario parse_scenario(std::istream& in, const std::string& origin);
[[nodiscard]] Scenario read_scenario(const std::string& path);

[[nodiscard]] double dbm_to_watt(double dbm);
[[nodiscard]] double watt_to_dbm(double watt);

// Sweep grid resolved to explicit values in `unit`.
struct SweepSpec {
    std::string variable; // microwave_frequency | microwave_power | pump_power
                          // | pump_detuning | temperature
    std::string unit;     // hz | w | dbm | celsius
    std::vector<double> values;
    std::vector<std::string> outputs; // observable columns; defaulted when empty
};

// A value the builder had to fill in, reported by `scenario validate`.
struct BuildNote {
    std::string section;
    std::string key;
    std::string note;
};

struct BuiltScenario {
    ConverterSystem system;
    std::optional<ModeLadder> ladder;
    double temperature_c = 0.0;       // where the system was evaluated (ladder only)
    double pump_detuning_hz = 0.0;    // configured drive offsets, for re-application
    double microwave_detuning_hz = 0.0;
    std::optional<SweepSpec> sweep;
    std::optional<double> measured_suppression_db; // [reflection] record, not enforced
    std::optional<double> reflection_mode_matching;
    std::optional<double> g_simulated_hz;          // independent simulation, for comparison
    std::vector<BuildNote> defaults;
    // Scenario identity carried along for reports.
    std::string name;
    int version = 1;
    std::string hash_hex;
    ProvenanceCounts provenance;
};

// Validate the scenario against the known schema (unknown sections or keys
// are rejected), build the converter system (applying the mode ladder at the
// configured temperature when present) and resolve the sweep grid.
[[nodiscard]] BuiltScenario build_scenario(const Scenario& scenario);

// System with ladder-derived mode frequencies at temperature t_c and the
// configured drive offsets re-applied.  Without a ladder the system is
// returned unchanged.
[[nodiscard]] ConverterSystem at_temperature(const BuiltScenario& built, double t_c);

} // namespace eoconv
