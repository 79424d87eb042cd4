#include "eoconv/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <thread>

#include "eoconv/constants.hpp"
#include "eoconv/detuning.hpp"

namespace eoconv {

namespace {

std::string fmt12(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

double microwave_photons(const ConverterSystem& sys) {
    const double total = sys.mw.total_rate();
    const double det = mw_detuning(sys);
    if (!(sys.mw.omega0 > 0.0) || !(total > 0.0)) return 0.0;
    return (2.0 * sys.mw.gamma * sys.mw_power / (kHbar * sys.mw.omega0)) /
           (det * det + total * total);
}

// FSR asymmetry at the working point [Hz]: from the ladder when present,
// otherwise from the configured sideband frequencies.
double working_asymmetry_hz(const BuiltScenario& built) {
    if (built.ladder)
        return fsr_pair(*built.ladder, built.temperature_c).asymmetry();
    const ConverterSystem& sys = built.system;
    const double up = sys.sb_plus.omega0 - sys.pump.omega0;
    const double down = sys.pump.omega0 - sys.sb_minus.omega0;
    return angular_to_hz(up - down);
}

nlohmann::json scenario_json(const BuiltScenario& built) {
    return {
        {"hash", built.hash_hex},
        {"name", built.name},
        {"provenance",
         {{"assumed", built.provenance.assumed},
          {"fitted", built.provenance.fitted},
          {"paper", built.provenance.paper},
          {"untagged", built.provenance.untagged}}},
        {"version", built.version},
    };
}

nlohmann::json suppression_json(const BuiltScenario& built,
                                const ConversionResult& formula) {
    const ConverterSystem& sys = built.system;
    const double asym_hz = working_asymmetry_hz(built);
    const double ratio =
        suppression(hz_to_angular(asym_hz), sys.pump.gamma, sys.pump.gamma_prime);
    nlohmann::json j = {
        {"asymmetry_hz", asym_hz},
        {"predicted_ratio", ratio},
        {"predicted_db", 10.0 * std::log10(ratio)},
    };
    if (formula.p_plus > 0.0 && formula.p_minus > 0.0)
        j["at_drive_db"] = 10.0 * std::log10(formula.p_plus / formula.p_minus);
    if (built.measured_suppression_db)
        j["measured_db"] = *built.measured_suppression_db;
    return j;
}

struct RowContext {
    const ConverterSystem* sys = nullptr;
    const ConversionResult* formula = nullptr;
    const ConversionResult* depleted = nullptr;
    const SteadyState* state = nullptr;
    const FsrPair* fsr = nullptr;
};

using Observable = std::function<double(const RowContext&)>;

const std::map<std::string, Observable>& observables() {
    static const std::map<std::string, Observable> table = {
        {"p_plus_w", [](const RowContext& c) { return c.formula->p_plus; }},
        {"p_minus_w", [](const RowContext& c) { return c.formula->p_minus; }},
        {"eta_plus", [](const RowContext& c) { return c.formula->eta_plus; }},
        {"eta_minus", [](const RowContext& c) { return c.formula->eta_minus; }},
        {"zeta_plus_per_w", [](const RowContext& c) { return c.formula->zeta_plus; }},
        {"zeta_minus_per_w", [](const RowContext& c) { return c.formula->zeta_minus; }},
        {"p_plus_over_p_mw",
         [](const RowContext& c) {
             return c.sys->mw_power > 0.0
                        ? c.formula->p_plus / c.sys->mw_power
                        : std::numeric_limits<double>::quiet_NaN();
         }},
        {"pump_photons",
         [](const RowContext& c) {
             return intracavity_photon_number(
                 c.sys->pump, c.sys->pump_mode_matching * c.sys->pump_power,
                 pump_detuning(*c.sys));
         }},
        {"microwave_photons",
         [](const RowContext& c) { return microwave_photons(*c.sys); }},
        {"cooperativity", [](const RowContext& c) { return cooperativity(*c.sys); }},
        {"suppression_at_drive_db",
         [](const RowContext& c) {
             if (!(c.formula->p_plus > 0.0) || !(c.formula->p_minus > 0.0))
                 return std::numeric_limits<double>::quiet_NaN();
             return 10.0 * std::log10(c.formula->p_plus / c.formula->p_minus);
         }},
        {"p_plus_w_depleted", [](const RowContext& c) { return c.depleted->p_plus; }},
        {"p_minus_w_depleted", [](const RowContext& c) { return c.depleted->p_minus; }},
        {"eta_plus_depleted", [](const RowContext& c) { return c.depleted->eta_plus; }},
        {"eta_minus_depleted",
         [](const RowContext& c) { return c.depleted->eta_minus; }},
        {"departure_plus",
         [](const RowContext& c) {
             if (!(c.formula->p_plus > 0.0))
                 return std::numeric_limits<double>::quiet_NaN();
             return std::abs(c.depleted->p_plus - c.formula->p_plus) /
                    c.formula->p_plus;
         }},
        {"fsr_plus_hz", [](const RowContext& c) { return c.fsr->fsr_plus; }},
        {"fsr_minus_hz", [](const RowContext& c) { return c.fsr->fsr_minus; }},
        {"asymmetry_hz", [](const RowContext& c) { return c.fsr->asymmetry(); }},
    };
    return table;
}

const std::set<std::string>& depleted_columns() {
    static const std::set<std::string> names = {
        "p_plus_w_depleted", "p_minus_w_depleted", "eta_plus_depleted",
        "eta_minus_depleted", "departure_plus"};
    return names;
}

const std::set<std::string>& ladder_columns() {
    static const std::set<std::string> names = {"fsr_plus_hz", "fsr_minus_hz",
                                                "asymmetry_hz"};
    return names;
}

std::string sanitized(std::string text) {
    for (char& c : text) {
        if (c == ',') c = ';';
        if (c == '\n' || c == '\r') c = ' ';
    }
    return text;
}

} // namespace

nlohmann::json run_point(const BuiltScenario& built, bool deplete) {
    const ConverterSystem& sys = built.system;
    const ConversionResult formula = sideband_powers_undepleted(sys);

    nlohmann::json j;
    j["scenario"] = scenario_json(built);
    j["drives"] = {
        {"microwave_frequency_hz", angular_to_hz(sys.mw_drive)},
        {"microwave_power_w", sys.mw_power},
        {"pump_frequency_hz", angular_to_hz(sys.pump_drive)},
        {"pump_mode_matching", sys.pump_mode_matching},
        {"pump_power_w", sys.pump_power},
    };
    j["modes"] = {
        {"microwave_frequency_hz", angular_to_hz(sys.mw.omega0)},
        {"microwave_loaded_q", sys.mw.loaded_q()},
        {"pump_frequency_hz", angular_to_hz(sys.pump.omega0)},
        {"pump_loaded_q", sys.pump.loaded_q()},
        {"sideband_minus_frequency_hz", angular_to_hz(sys.sb_minus.omega0)},
        {"sideband_plus_frequency_hz", angular_to_hz(sys.sb_plus.omega0)},
    };
    j["detunings_hz"] = {
        {"microwave", angular_to_hz(mw_detuning(sys))},
        {"pump", angular_to_hz(pump_detuning(sys))},
        {"sideband_minus", angular_to_hz(sideband_detuning(sys, Sideband::Minus))},
        {"sideband_plus", angular_to_hz(sideband_detuning(sys, Sideband::Plus))},
    };
    j["rate_magnitudes_hz"] = {
        {"gamma_microwave", angular_to_hz(std::abs(gamma_mw_total(sys)))},
        {"gamma_pump", angular_to_hz(std::abs(gamma_p(sys)))},
        {"gamma_sideband_minus",
         angular_to_hz(std::abs(gamma_sb(sys, Sideband::Minus)))},
        {"gamma_sideband_plus",
         angular_to_hz(std::abs(gamma_sb(sys, Sideband::Plus)))},
    };
    j["perturbative"] = {
        {"eta_minus", formula.eta_minus},
        {"eta_plus", formula.eta_plus},
        {"p_minus_w", formula.p_minus},
        {"p_plus_w", formula.p_plus},
        {"perturbative_regime_exceeded", formula.perturbative_regime_exceeded},
        {"zeta_minus_per_w", formula.zeta_minus},
        {"zeta_plus_per_w", formula.zeta_plus},
    };
    if (sys.mw_power > 0.0)
        j["perturbative"]["p_plus_over_p_mw"] = formula.p_plus / sys.mw_power;
    j["photons"] = {
        {"microwave_intracavity", microwave_photons(sys)},
        {"pump_intracavity",
         intracavity_photon_number(sys.pump, sys.pump_mode_matching * sys.pump_power,
                                   pump_detuning(sys))},
    };
    j["cooperativity"] = cooperativity(sys);

    const double g_hz = angular_to_hz(sys.g);
    nlohmann::json g_block = {
        {"configured_hz", g_hz},
        {"counterpropagating_corrected_hz", counterpropagating_corrected_g(g_hz)},
    };
    if (built.g_simulated_hz) {
        g_block["simulated_hz"] = *built.g_simulated_hz;
        g_block["simulated_over_corrected"] =
            *built.g_simulated_hz / counterpropagating_corrected_g(g_hz);
    }
    j["g"] = g_block;
    j["suppression"] = suppression_json(built, formula);
    if (built.ladder) {
        const FsrPair fsr = fsr_pair(*built.ladder, built.temperature_c);
        j["ladder"] = {
            {"asymmetry_hz", fsr.asymmetry()},
            {"fsr_minus_hz", fsr.fsr_minus},
            {"fsr_plus_hz", fsr.fsr_plus},
            {"temperature_c", built.temperature_c},
        };
    }

    if (deplete) {
        SolveOptions options;
        const SteadyState state = solve_steady_state(sys, options);
        const ConversionResult out = output_powers(sys, state);
        j["depleted"] = {
            {"converged", state.converged},
            {"eta_minus", out.eta_minus},
            {"eta_plus", out.eta_plus},
            {"iterations", state.iterations},
            {"microwave_intracavity", std::norm(state.c)},
            {"p_minus_w", out.p_minus},
            {"p_plus_w", out.p_plus},
            {"pump_intracavity", std::norm(state.a)},
            {"residual", state.residual},
        };
    }
    return j;
}

SweepTable run_sweep(const BuiltScenario& built, bool deplete) {
    if (!built.sweep)
        throw DomainError("scenario has no [sweep] section");
    const SweepSpec& spec = *built.sweep;

    SweepTable table;
    std::vector<std::string> var_cols;
    if (spec.variable == "microwave_frequency") {
        var_cols = {"microwave_frequency_hz"};
    } else if (spec.variable == "pump_detuning") {
        var_cols = {"pump_detuning_hz"};
    } else if (spec.variable == "temperature") {
        var_cols = {"temperature_c"};
    } else if (spec.unit == "dbm") {
        var_cols = {spec.variable + "_dbm", spec.variable + "_w"};
    } else {
        var_cols = {spec.variable + "_w"};
    }

    std::vector<std::string> outputs = spec.outputs;
    if (outputs.empty()) {
        if (spec.variable == "temperature") {
            outputs = {"fsr_plus_hz", "fsr_minus_hz", "asymmetry_hz", "p_plus_w",
                       "p_minus_w"};
        } else {
            outputs = {"p_plus_w", "p_minus_w", "eta_plus", "eta_minus"};
        }
        if (deplete)
            for (const char* extra : {"p_plus_w_depleted", "p_minus_w_depleted",
                                      "departure_plus"})
                outputs.push_back(extra);
    }

    bool needs_solver = false;
    for (const std::string& name : outputs) {
        if (!observables().count(name))
            throw DomainError("unknown sweep output '" + name + "'");
        if (depleted_columns().count(name)) needs_solver = true;
        if (ladder_columns().count(name) && !built.ladder)
            throw DomainError("sweep output '" + name + "' needs a [ladder] section");
    }

    table.columns = var_cols;
    table.columns.insert(table.columns.end(), outputs.begin(), outputs.end());

    table.meta.push_back("eoconv sweep v1");
    table.meta.push_back("scenario: " + built.name);
    table.meta.push_back("scenario_hash: " + built.hash_hex);
    table.meta.push_back("variable: " + spec.variable + " [" + spec.unit + "]");
    table.meta.push_back(std::string("deplete: ") +
                         (needs_solver || deplete ? "true" : "false"));
    {
        const double asym_hz = working_asymmetry_hz(built);
        const double ratio = suppression(hz_to_angular(asym_hz),
                                         built.system.pump.gamma,
                                         built.system.pump.gamma_prime);
        table.meta.push_back("suppression_predicted_db: " +
                             fmt12(10.0 * std::log10(ratio)));
        if (built.measured_suppression_db)
            table.meta.push_back("suppression_measured_db: " +
                                 fmt12(*built.measured_suppression_db));
    }

    const std::size_t n = spec.values.size();
    const std::size_t width = table.columns.size();
    table.rows.assign(n, std::vector<double>(width,
                                             std::numeric_limits<double>::quiet_NaN()));
    table.row_errors.assign(n, "");

    // Constant ladder spacings for non-temperature sweeps.
    FsrPair fixed_fsr;
    if (built.ladder && spec.variable != "temperature")
        fixed_fsr = fsr_pair(*built.ladder, built.temperature_c);

    const auto evaluate_row = [&](std::size_t i) {
        const double v = spec.values[i];
        std::vector<double>& row = table.rows[i];
        std::size_t col = 0;
        try {
            ConverterSystem sys = built.system;
            FsrPair fsr = fixed_fsr;
            if (spec.variable == "microwave_frequency") {
                sys.mw_drive = hz_to_angular(v);
                row[col++] = v;
            } else if (spec.variable == "pump_detuning") {
                sys.pump_drive = sys.pump.omega0 + hz_to_angular(v);
                row[col++] = v;
            } else if (spec.variable == "temperature") {
                sys = at_temperature(built, v);
                fsr = fsr_pair(*built.ladder, v);
                row[col++] = v;
            } else {
                const double watts = spec.unit == "dbm" ? dbm_to_watt(v) : v;
                if (spec.variable == "microwave_power") {
                    sys.mw_power = watts;
                } else {
                    sys.pump_power = watts;
                }
                row[col++] = v;
                if (spec.unit == "dbm") row[col++] = watts;
            }

            const ConversionResult formula = sideband_powers_undepleted(sys);
            ConversionResult depleted_result;
            SteadyState state;
            RowContext ctx;
            ctx.sys = &sys;
            ctx.formula = &formula;
            ctx.fsr = &fsr;
            if (needs_solver) {
                state = solve_steady_state(sys, SolveOptions{});
                depleted_result = output_powers(sys, state);
                ctx.state = &state;
                ctx.depleted = &depleted_result;
            }
            for (const std::string& name : outputs)
                row[col++] = observables().at(name)(ctx);
        } catch (const Error& e) {
            table.row_errors[i] = sanitized(e.what());
        }
    };

    // Grid points are independent; evaluate them concurrently and gather in
    // grid order (each worker owns a stride of preallocated rows).
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const std::size_t n_workers = std::min<std::size_t>({hw, n, 16});
    if (n_workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) evaluate_row(i);
    } else {
        std::vector<std::thread> workers;
        workers.reserve(n_workers);
        for (std::size_t w = 0; w < n_workers; ++w)
            workers.emplace_back([&, w] {
                for (std::size_t i = w; i < n; i += n_workers) evaluate_row(i);
            });
        for (auto& worker : workers) worker.join();
    }
    return table;
}

nlohmann::json compare_schemes(const BuiltScenario& built, double target_db) {
    if (target_db < 0.0)
        throw DomainError("target suppression must be >= 0 dB");
    const double ratio = std::pow(10.0, target_db / 10.0);
    const double penalty = detuning_scheme_pump_penalty(ratio);
    const ConverterSystem& sys = built.system;
    const double total_hz = angular_to_hz(sys.pump.total_rate());
    const double root = std::sqrt(ratio - 1.0);
    return {
        {"linewidth_total_hz", total_hz},
        {"pump_penalty_factor", penalty},
        {"required_fsr_asymmetry_hz", total_hz * root},
        {"required_pump_detuning_hz", 0.5 * total_hz * root},
        {"scenario", scenario_json(built)},
        {"suppression_ratio", ratio},
        {"target_suppression_db", target_db},
    };
}

nlohmann::json fit_report_json(const FitReport& report) {
    const auto values_json = [](const std::vector<FitValue>& values) {
        nlohmann::json arr = nlohmann::json::array();
        for (const FitValue& v : values)
            arr.push_back({{"name", v.name}, {"sigma", v.sigma}, {"value", v.value}});
        return arr;
    };
    return {
        {"assumptions", report.assumptions},
        {"derived", values_json(report.derived)},
        {"iterations", report.iterations},
        {"kind", std::string(to_string(report.kind))},
        {"params", values_json(report.params)},
        {"residual_rms", report.residual_rms},
        {"warnings", report.warnings},
    };
}

nlohmann::json validate_report(const Scenario& scenario, const BuiltScenario& built) {
    nlohmann::json defaults = nlohmann::json::array();
    for (const BuildNote& note : built.defaults)
        defaults.push_back(
            {{"key", note.key}, {"note", note.note}, {"section", note.section}});
    return {
        {"defaults", defaults},
        {"hash", built.hash_hex},
        {"name", built.name},
        {"provenance_counts",
         {{"assumed", built.provenance.assumed},
          {"fitted", built.provenance.fitted},
          {"paper", built.provenance.paper},
          {"untagged", built.provenance.untagged}}},
        {"sections", scenario.sections.size()},
        {"status", "ok"},
        {"sweep_points", built.sweep ? built.sweep->values.size() : 0},
        {"version", built.version},
    };
}

std::string to_csv(const SweepTable& table) {
    std::string out;
    for (const std::string& line : table.meta) {
        out += "# ";
        out += line;
        out += '\n';
    }
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
        if (c) out += ',';
        out += table.columns[c];
    }
    out += ",error\n";
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const std::vector<double>& row = table.rows[i];
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) out += ',';
            out += fmt12(row[c]);
        }
        out += ',';
        out += i < table.row_errors.size() ? table.row_errors[i] : "";
        out += '\n';
    }
    return out;
}

} // namespace eoconv
