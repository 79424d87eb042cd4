#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "eoconv/cmt.hpp"
#include "eoconv/fitlab.hpp"
#include "eoconv/scenario.hpp"

// Scenario-driven evaluation: single-point JSON reports, sweep tables and the
// detuning-scheme comparison.  Everything here is deterministic: rerunning a
// command on the same scenario yields byte-identical output.

namespace eoconv {

// In-memory sweep result; serialised to CSV (the data contract) or SVG (a
// thin chart of the same table).
struct SweepTable {
    std::vector<std::string> meta;                // '#' header lines, sans prefix
    std::vector<std::string> columns;             // fixed column order
    std::vector<std::vector<double>> rows;        // one vector per grid point
    std::vector<std::string> row_errors;          // per-row message, "" when clean
};

// Full report at the configured working point: conversion observables, rate
// magnitudes, photon numbers, cooperativity and the suppression summary.
// With deplete, the nonlinear steady state is reported alongside the
// perturbative values.
[[nodiscard]] nlohmann::json run_point(const BuiltScenario& built, bool deplete);

// Evaluate the scenario's sweep grid.  Rows are computed concurrently and
// gathered in grid order; per-row solver failures land in the error column
// and the sweep continues.
[[nodiscard]] SweepTable run_sweep(const BuiltScenario& built, bool deplete);

// Pump-detuning scheme versus mode-asymmetry scheme at a target sideband
// suppression: required detuning, required asymmetry and the pump-power
// penalty of the detuning scheme.
[[nodiscard]] nlohmann::json compare_schemes(const BuiltScenario& built,
                                             double target_db);

[[nodiscard]] nlohmann::json fit_report_json(const FitReport& report);

// Schema/build audit of a scenario: provenance counts, hash, logged defaults.
[[nodiscard]] nlohmann::json validate_report(const Scenario& scenario,
                                             const BuiltScenario& built);

// CSV serialisation: '#' metadata header (scenario hash included), one header
// row, 12 significant digits, LF endings.
[[nodiscard]] std::string to_csv(const SweepTable& table);

} // namespace eoconv
