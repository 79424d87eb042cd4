// Command line front end: scenario-driven point evaluations, sweeps, scheme
// comparison, trace fits and scenario audits.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "eoconv/errors.hpp"
#include "eoconv/harness.hpp"
#include "eoconv/io.hpp"
#include "eoconv/scenario.hpp"
#include "eoconv/svg.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitSolver = 3;
constexpr int kExitIo = 4;

struct GlobalOptions {
    std::string scenario_path;
    std::string out_path;   // empty: stdout
    std::string format;     // empty: per-command default
    bool deplete = false;
};

eoconv::BuiltScenario load_built(const GlobalOptions& opts) {
    if (opts.scenario_path.empty())
        throw eoconv::DomainError("--scenario is required for this command");
    return eoconv::build_scenario(eoconv::read_scenario(opts.scenario_path));
}

void emit(const GlobalOptions& opts, const std::string& text) {
    if (opts.out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(opts.out_path, std::ios::binary);
    if (!out)
        throw eoconv::IoError("cannot open output file: " + opts.out_path);
    out << text;
    if (!out)
        throw eoconv::IoError("write failed: " + opts.out_path);
}

void emit_json(const GlobalOptions& opts, const nlohmann::json& j) {
    if (!opts.format.empty() && opts.format != "json")
        throw eoconv::DomainError("this command emits json; got --format " +
                                  opts.format);
    emit(opts, j.dump(2) + "\n");
}

int run_point_cmd(const GlobalOptions& opts) {
    const eoconv::BuiltScenario built = load_built(opts);
    emit_json(opts, eoconv::run_point(built, opts.deplete));
    return 0;
}

int run_sweep_cmd(const GlobalOptions& opts) {
    const eoconv::BuiltScenario built = load_built(opts);
    const eoconv::SweepTable table = eoconv::run_sweep(built, opts.deplete);
    const std::string format = opts.format.empty() ? "csv" : opts.format;
    if (format == "csv") {
        emit(opts, eoconv::to_csv(table));
    } else if (format == "svg") {
        emit(opts, eoconv::render_sweep_svg(table, built.name + " sweep"));
    } else {
        throw eoconv::DomainError("sweep emits csv or svg; got --format " + format);
    }
    return 0;
}

int compare_schemes_cmd(const GlobalOptions& opts, double target_db) {
    const eoconv::BuiltScenario built = load_built(opts);
    emit_json(opts, eoconv::compare_schemes(built, target_db));
    return 0;
}

int fit_cmd(const GlobalOptions& opts, const std::string& trace_path,
            const std::string& expected_kind, const std::string& split_name,
            double mode_matching, const std::string& side_name) {
    const eoconv::SpectrumTrace trace = eoconv::read_trace(trace_path);
    if (!expected_kind.empty() &&
        trace.kind != eoconv::trace_kind_from_string(expected_kind))
        throw eoconv::DomainError("trace kind is '" +
                                  std::string(eoconv::to_string(trace.kind)) +
                                  "', expected '" + expected_kind + "'");

    eoconv::FitReport report;
    if (trace.kind == eoconv::TraceKind::Crossing) {
        report = eoconv::fit_avoided_crossing(trace);
    } else {
        eoconv::LinewidthSplit split;
        if (split_name == "total") {
            split.rule = eoconv::LinewidthSplit::Rule::TotalOnly;
        } else if (split_name == "critical") {
            split.rule = eoconv::LinewidthSplit::Rule::CriticallyCoupled;
        } else if (split_name == "matched") {
            split.rule = eoconv::LinewidthSplit::Rule::KnownModeMatching;
        } else {
            split.rule = eoconv::LinewidthSplit::Rule::DipContrast;
        }
        split.mode_matching = mode_matching;
        split.side = side_name == "over" ? eoconv::CouplingSide::Overcoupled
                                         : eoconv::CouplingSide::Undercoupled;
        report = eoconv::fit_lorentzian(trace, split);
    }
    nlohmann::json j = eoconv::fit_report_json(report);
    j["source"] = trace_path;
    emit_json(opts, j);
    return 0;
}

int scenario_validate_cmd(const GlobalOptions& opts) {
    if (opts.scenario_path.empty())
        throw eoconv::DomainError("--scenario is required for this command");
    const eoconv::Scenario scenario = eoconv::read_scenario(opts.scenario_path);
    const eoconv::BuiltScenario built = eoconv::build_scenario(scenario);
    emit_json(opts, eoconv::validate_report(scenario, built));
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Triply resonant electro-optic microwave-optical converter toolkit"};
    app.require_subcommand(1);
    app.fallthrough(); // global flags are accepted after the subcommand too

    GlobalOptions opts;
    app.add_option("--scenario", opts.scenario_path,
                   "Scenario file ([section] key = value)");
    app.add_option("--out", opts.out_path, "Output path (default: stdout)");
    app.add_option("--format", opts.format, "Output format")
        ->check(CLI::IsMember({"csv", "json", "svg"}));
    app.add_flag("--deplete", opts.deplete,
                 "Also solve the nonlinear (pump-depleted) steady state");

    CLI::App* point =
        app.add_subcommand("point", "Evaluate the scenario working point (json)");
    CLI::App* sweep =
        app.add_subcommand("sweep", "Run the scenario sweep grid (csv or svg)");

    double target_db = 0.0;
    CLI::App* compare = app.add_subcommand(
        "compare-schemes",
        "Pump-detuning versus mode-asymmetry suppression schemes (json)");
    compare->add_option("--target-db", target_db, "Target sideband suppression [dB]")
        ->required();

    std::string trace_path;
    std::string expected_kind;
    std::string split_name = "total";
    std::string side_name = "under";
    double mode_matching = 1.0;
    CLI::App* fit = app.add_subcommand("fit", "Fit a spectrum trace (json)");
    fit->add_option("--trace", trace_path, "Trace file")->required();
    fit->add_option("--kind", expected_kind,
                    "Expected trace kind; mismatch is an error")
        ->check(CLI::IsMember(
            {"optical-reflection", "microwave-reflection", "crossing"}));
    fit->add_option("--split", split_name,
                    "Linewidth split rule for reflection dips")
        ->check(CLI::IsMember({"total", "critical", "matched", "contrast"}));
    fit->add_option("--mode-matching", mode_matching,
                    "Known spatial mode matching (with --split matched)");
    fit->add_option("--side", side_name, "Coupling side for the split")
        ->check(CLI::IsMember({"under", "over"}));

    CLI::App* scenario_cmd = app.add_subcommand("scenario", "Scenario utilities");
    scenario_cmd->require_subcommand(1);
    CLI::App* validate = scenario_cmd->add_subcommand(
        "validate", "Parse, build and audit a scenario (json)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        if (point->parsed()) return run_point_cmd(opts);
        if (sweep->parsed()) return run_sweep_cmd(opts);
        if (compare->parsed()) return compare_schemes_cmd(opts, target_db);
        if (fit->parsed())
            return fit_cmd(opts, trace_path, expected_kind, split_name,
                           mode_matching, side_name);
        if (scenario_cmd->parsed() && validate->parsed())
            return scenario_validate_cmd(opts);
        std::fprintf(stderr, "no command given\n");
        return kExitConfig;
    } catch (const eoconv::IoError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitIo;
    } catch (const eoconv::NoConvergence& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitSolver;
    } catch (const eoconv::IllConditioned& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitSolver;
    } catch (const eoconv::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitConfig;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitConfig;
    }
}
