// Acceptance gate: one printed line per criterion, nonzero exit on failure.
// Exercises the library end to end against the nominal converter working
// point, the committed measurement traces, and the installed CLI.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "eoconv/cmt.hpp"
#include "eoconv/constants.hpp"
#include "eoconv/coupling.hpp"
#include "eoconv/dispersion.hpp"
#include "eoconv/errors.hpp"
#include "eoconv/fitlab.hpp"
#include "eoconv/harness.hpp"
#include "eoconv/io.hpp"
#include "eoconv/modes.hpp"
#include "eoconv/scenario.hpp"
#include "test_support.hpp"

using namespace eoconv;
using eoconv::testing::rel_diff;

namespace {

template <typename... Args>
std::string fmt(const char* f, Args... a) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, a...);
    return std::string(buf);
}

class Timer {
public:
    Timer() : start_(std::chrono::steady_clock::now()) {}
    [[nodiscard]] double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                             start_)
            .count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

BuiltScenario load_scenario(const std::string& name) {
    const std::string path = std::string(EOCONV_SCENARIO_DIR) + "/" + name;
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    return build_scenario(parse_scenario(in, path));
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

using Outcome = std::pair<bool, std::string>;

// --- criterion bodies ------------------------------------------------------

Outcome c1_working_point() {
    const Timer timer;
    const BuiltScenario built = load_scenario("efficiency.ini");
    const ConverterSystem& sys = built.system;
    const ConversionResult r = sideband_powers_undepleted(sys);
    const double slope = r.p_plus / sys.mw_power; // P+ / P_mw [unitless]
    const double secs = timer.seconds();

    const double sb_plus_hz = angular_to_hz(sys.sb_plus.omega0);
    const bool ok = rel_diff(r.eta_plus, 1.09e-3) <= 0.05 &&
                    rel_diff(slope, 23.68) <= 0.05 &&
                    std::abs(sb_plus_hz - 193.5e12) < 0.05e12 && secs < 1.0;
    return {ok, fmt("eta_plus=%.4g (1.09e-3 +-5%%), P+/P_mw=%.4f (23.68 +-5%%), "
                    "%.3fs",
                    r.eta_plus, slope, secs)};
}

Outcome c2_coupling_inference() {
    const ConverterSystem sys = load_scenario("efficiency.ini").system;
    const double g_fit = infer_g_from_slope(23.68, sys); // [rad/s]
    const double g_fit_hz = angular_to_hz(g_fit);
    const double corrected_hz = angular_to_hz(counterpropagating_corrected_g(g_fit));
    const double ratio = 28.0 / corrected_hz; // independent-simulation value
    const bool ok =
        rel_diff(g_fit, hz_to_angular(7.43)) <= 0.01 && ratio > 2.0 && ratio < 4.0;
    return {ok, fmt("g_fit=%.4f Hz (7.43 +-1%%), corrected=%.3f Hz, "
                    "simulated/corrected=%.3f (~3x gap)",
                    g_fit_hz, corrected_hz, ratio)};
}

Outcome c3_cooperativity() {
    const ConverterSystem sys = load_scenario("efficiency.ini").system;
    const double g0 = cooperativity(sys);
    const double n_pump = intracavity_photon_number(sys.pump, sys.pump_power, 0.0);
    const bool ok = g0 >= 2e-3 && g0 <= 8e-3 && rel_diff(n_pump, 7.5e8) <= 0.05;
    return {ok, fmt("G0=%.4g (within factor 2 of 4e-3), n_pump=%.4g (7.5e8 +-5%%)",
                    g0, n_pump)};
}

Outcome c4_pump_penalty() {
    const double penalty = detuning_scheme_pump_penalty(1000.0); // 30 dB target
    const bool ok = rel_diff(penalty, 250.75) <= 1e-3;
    return {ok, fmt("penalty(30 dB)=%.6g (250.75 +-0.1%%)", penalty)};
}

Outcome c5_suppression_identity() {
    const Timer timer;
    const double gamma = hz_to_angular(346e3);
    const double gamma_prime = hz_to_angular(346e3);
    const double s0 = suppression(0.0, gamma, gamma_prime);
    const double s2 = suppression(gamma + gamma_prime, gamma, gamma_prime);

    // Power ratio from the full sideband formula must equal the closed-form
    // suppression for random systems with a detuned lower sideband.
    std::mt19937_64 rng(424242);
    const auto uniform = [&](double lo, double hi) {
        return lo + (hi - lo) * (static_cast<double>(rng() >> 11) + 0.5) * 0x1p-53;
    };
    double max_rel = 0.0;
    for (int k = 0; k < 1000; ++k) {
        ConverterSystem sys = eoconv::testing::reference_system();
        sys.pump.gamma = hz_to_angular(uniform(50e3, 5e6));
        sys.pump.gamma_prime = hz_to_angular(uniform(50e3, 5e6));
        sys.sb_plus.gamma = sys.sb_minus.gamma = sys.pump.gamma;
        sys.sb_plus.gamma_prime = sys.sb_minus.gamma_prime = sys.pump.gamma_prime;
        sys.mw.gamma = hz_to_angular(uniform(1e6, 20e6));
        sys.mw.gamma_prime = hz_to_angular(uniform(1e6, 20e6));
        sys.g = hz_to_angular(uniform(1.0, 50.0));
        const double asym = uniform(-30e6, 30e6); // [Hz]
        sys.pump_drive = sys.pump.omega0;
        sys.mw_drive = sys.mw.omega0;
        sys.sb_plus.omega0 = sys.pump.omega0 + sys.mw.omega0;
        // Snap the offset to the drive's floating-point grid so the detuning
        // recovered from the absolute frequencies is exactly the one tested.
        const double drive_minus = sys.pump_drive - sys.mw_drive;
        const double grid = std::ldexp(1.0, std::ilogb(drive_minus) - 52);
        const double delta = std::round(hz_to_angular(asym) / grid) * grid;
        sys.sb_minus.omega0 = drive_minus - delta;

        const ConversionResult r = sideband_powers_undepleted(sys);
        const double s = suppression(delta, sys.pump.gamma, sys.pump.gamma_prime);
        max_rel = std::max(max_rel, rel_diff(r.p_plus / r.p_minus, s));
    }
    const double secs = timer.seconds();
    const bool ok = s0 == 1.0 && s2 == 2.0 && max_rel < 1e-9 && secs < 10.0;
    return {ok, fmt("S(0)=%g, S(tot)=%g, 1000-draw ratio identity max rel=%.2e, "
                    "%.2fs",
                    s0, s2, max_rel, secs)};
}

Outcome c6_crossing_fit() {
    const SpectrumTrace trace =
        read_trace(std::string(EOCONV_DATA_DIR) + "/crossing_branches.txt");
    const FitReport report = fit_avoided_crossing(trace);
    const double kappa = report.value("kappa_hz");
    const double slope_ratio = report.value("slope_ratio");

    // Model identities on a clean crossing: minimum splitting is exactly
    // 2*kappa, and the branch sum always equals the bare-mode sum.
    const CrossingModel model{
        BareMode{193.414e12, -2.7e9, 27.88, Polarization::TE},
        BareMode{193.414e12, -1.5e9, 27.88, Polarization::TM},
        5.27e6,
    };
    const double t_cross = crossing_temperature(model);
    const HybridPair at_cross = hybridized_frequencies(model, t_cross);
    const double split_rel =
        rel_diff(at_cross.upper - at_cross.lower, 2.0 * model.kappa);
    double max_sum_rel = 0.0;
    for (int i = 0; i < 10000; ++i) {
        const double t = 27.4 + 0.9 * i / 9999.0;
        const HybridPair pair = hybridized_frequencies(model, t);
        const double bare_sum =
            model.mode_a.frequency_at(t) + model.mode_b.frequency_at(t);
        max_sum_rel = std::max(max_sum_rel,
                               rel_diff(pair.upper + pair.lower, bare_sum));
    }
    const bool ok = rel_diff(kappa, 5.27e6) <= 0.05 &&
                    rel_diff(slope_ratio, 1.8) <= 0.05 && split_rel < 1e-9 &&
                    max_sum_rel < 1e-9;
    return {ok, fmt("kappa=%.4g Hz (5.27e6 +-5%%), slope_ratio=%.3f (1.8 +-5%%), "
                    "min_split=2k rel=%.1e, branch-sum max rel=%.1e",
                    kappa, slope_ratio, split_rel, max_sum_rel)};
}

Outcome c7_sideband_selection_sweep() {
    const Timer timer;
    const BuiltScenario built = load_scenario("single-sideband.ini");
    const SweepTable table = run_sweep(built, false);

    std::size_t col_plus = 0;
    std::size_t col_minus = 0;
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
        if (table.columns[i] == "p_plus_w") col_plus = i;
        if (table.columns[i] == "p_minus_w") col_minus = i;
    }
    if (col_plus == 0 || col_minus == 0) return {false, "sweep columns missing"};

    double best_plus = -1.0;
    double best_minus = -1.0;
    double x_plus = 0.0;
    double x_minus = 0.0;
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        if (!table.row_errors[i].empty()) return {false, table.row_errors[i]};
        const std::vector<double>& row = table.rows[i];
        if (row[col_plus] > best_plus) {
            best_plus = row[col_plus];
            x_plus = row[0];
        }
        if (row[col_minus] > best_minus) {
            best_minus = row[col_minus];
            x_minus = row[0];
        }
    }
    const double separation = x_plus - x_minus;

    double predicted_db = 0.0;
    double measured_db = 0.0;
    bool have_predicted = false;
    bool have_measured = false;
    for (const std::string& line : table.meta) {
        if (line.rfind("suppression_predicted_db: ", 0) == 0) {
            predicted_db = std::strtod(line.c_str() + 26, nullptr);
            have_predicted = true;
        }
        if (line.rfind("suppression_measured_db: ", 0) == 0) {
            measured_db = std::strtod(line.c_str() + 25, nullptr);
            have_measured = true;
        }
    }
    const double secs = timer.seconds();
    const bool ok = std::abs(separation - 18.1e6) <= 200e3 + 1.0 &&
                    have_predicted && have_measured && secs < 30.0;
    return {ok, fmt("peak separation=%.4g Hz (18.1e6 +- one 200 kHz step); "
                    "suppression predicted=%.2f dB vs measured=%.2f dB "
                    "(reported, not enforced), %.2fs",
                    separation, predicted_db, measured_db, secs)};
}

Outcome c8_depletion_knee() {
    const Timer timer;
    ConverterSystem sys = load_scenario("efficiency.ini").system;

    sys.mw_power = 1e-9;
    const double formula_1n = sideband_powers_undepleted(sys).p_plus;
    const double solved_1n = output_powers(sys, solve_steady_state(sys)).p_plus;
    const double rel_1n = rel_diff(formula_1n, solved_1n);

    double knee_w = 0.0;
    double knee_departure = 0.0;
    for (int dbm = -54; dbm <= -22; ++dbm) {
        sys.mw_power = std::pow(10.0, (dbm - 30) / 10.0);
        const double formula = sideband_powers_undepleted(sys).p_plus;
        const double solved = output_powers(sys, solve_steady_state(sys)).p_plus;
        const double departure = std::abs(1.0 - solved / formula);
        if (departure > 0.10) {
            knee_w = sys.mw_power;
            knee_departure = departure;
            break;
        }
    }
    const double secs = timer.seconds();
    const bool ok = rel_1n <= 1e-3 && knee_w > 0.0 && knee_w >= 1e-6 / 3.0 &&
                    knee_w <= 3e-6 && secs < 60.0;
    return {ok, fmt("1 nW agreement rel=%.2e (<=1e-3); >10%% departure first at "
                    "%.3g W (%.1f%%), within factor 3 of 1e-6 W, %.2fs",
                    rel_1n, knee_w, 100.0 * knee_departure, secs)};
}

Outcome c9_fit_round_trips() {
    // Noiseless forward-model traces must round-trip through the fitters.
    SpectrumTrace optical;
    optical.kind = TraceKind::OpticalReflection;
    optical.x_label = "frequency_hz";
    optical.y_label = "reflection";
    for (int i = 0; i < 401; ++i) {
        const double nu = 193.5e12 - 10e6 + 50e3 * i;
        optical.x.push_back(nu);
        optical.y.push_back(optical_reflection(hz_to_angular(nu),
                                               hz_to_angular(193.5e12),
                                               hz_to_angular(346e3),
                                               hz_to_angular(346e3), 0.6));
    }
    LinewidthSplit critical;
    critical.rule = LinewidthSplit::Rule::CriticallyCoupled;
    const FitReport opt = fit_lorentzian(optical, critical);
    double max_rel = rel_diff(opt.value("center_hz"), 193.5e12);
    max_rel = std::max(max_rel, rel_diff(opt.value("gamma_hz"), 346e3));
    max_rel = std::max(max_rel, rel_diff(opt.value("mode_matching"), 0.6));

    MicrowaveMode mode;
    mode.omega0 = hz_to_angular(8.90e9);
    mode.gamma = hz_to_angular(3.29e6);
    mode.gamma_prime = hz_to_angular(14.80e6);
    SpectrumTrace microwave;
    microwave.kind = TraceKind::MicrowaveReflection;
    microwave.x_label = "frequency_hz";
    microwave.y_label = "power_reflection";
    for (int i = 0; i < 601; ++i) {
        const double nu = 8.90e9 - 90e6 + 300e3 * i;
        microwave.x.push_back(nu);
        microwave.y.push_back(std::norm(microwave_reflection(mode,
                                                             hz_to_angular(nu))));
    }
    LinewidthSplit contrast;
    contrast.rule = LinewidthSplit::Rule::DipContrast;
    contrast.side = CouplingSide::Undercoupled;
    const FitReport mw = fit_lorentzian(microwave, contrast);
    max_rel = std::max(max_rel, rel_diff(mw.value("gamma_hz"), 3.29e6));
    max_rel = std::max(max_rel, rel_diff(mw.value("gamma_prime_hz"), 14.80e6));

    const CrossingModel model{
        BareMode{193.414e12, -2.7e9, 27.88, Polarization::TE},
        BareMode{193.414e12, -1.5e9, 27.88, Polarization::TM},
        5.27e6,
    };
    SpectrumTrace crossing;
    crossing.kind = TraceKind::Crossing;
    crossing.x_label = "temperature_c";
    crossing.y_label = "frequency_hz";
    for (int i = 0; i < 241; ++i) {
        const double t = 27.82 + 0.0005 * i;
        const HybridPair pair = hybridized_frequencies(model, t);
        crossing.x.push_back(t);
        crossing.y.push_back(pair.upper);
        crossing.y2.push_back(pair.lower);
    }
    const FitReport cross = fit_avoided_crossing(crossing);
    max_rel = std::max(max_rel, rel_diff(cross.value("kappa_hz"), 5.27e6));
    max_rel = std::max(max_rel, rel_diff(cross.value("slope_ratio"), 1.8));

    // Measured microwave trace: loaded Q consistent with a ~36.2 MHz linewidth.
    const FitReport measured = fit_lorentzian(
        read_trace(std::string(EOCONV_DATA_DIR) + "/microwave_reflection.txt"),
        contrast);
    const double fwhm = measured.value("fwhm_hz");
    const double center = measured.value("center_hz");
    const double loaded_q = measured.value("loaded_q");
    const bool measured_ok = rel_diff(fwhm, 36.2e6) <= 0.02 &&
                             rel_diff(center, 8.90e9) <= 1e-3 &&
                             rel_diff(loaded_q, 246.0) <= 0.02 &&
                             rel_diff(loaded_q, center / fwhm) <= 1e-6;

    const bool ok = max_rel < 1e-6 && measured_ok;
    return {ok, fmt("noiseless round-trips max rel=%.2e (<1e-6); measured trace "
                    "Q=%.1f (~246), FWHM=%.4g Hz (~36.2e6) at %.4g Hz",
                    max_rel, loaded_q, fwhm, center)};
}

Outcome c10_air_gap() {
    const double factor = air_gap_factor(0.4e-3, 20e-6, 28.0);
    const bool ok = factor >= 0.33 && factor <= 0.67;
    return {ok, fmt("air_gap_factor(0.4 mm, 20 um, 28)=%.4f (in [0.33, 0.67])",
                    factor)};
}

Outcome c11_cli_determinism() {
    namespace fs = std::filesystem;
    const std::string cli = EOCONV_CLI_PATH;
    const std::string scen = EOCONV_SCENARIO_DIR;
    const std::string data = EOCONV_DATA_DIR;
    const fs::path dir = "acceptance_cli_tmp";
    fs::create_directories(dir);

    const auto q = [](const std::string& s) { return "'" + s + "'"; };
    const std::string eff = q(scen + "/efficiency.ini");
    const std::string ssb = q(scen + "/single-sideband.ini");
    const std::vector<std::pair<std::string, std::string>> commands = {
        {"point-depleted", "--scenario " + eff + " --deplete point"},
        {"point-ladder", "--scenario " + ssb + " point"},
        {"sweep-csv", "--scenario " + ssb + " sweep"},
        {"sweep-svg", "--scenario " + ssb + " --format svg sweep"},
        {"sweep-depleted", "--scenario " + eff + " --deplete sweep"},
        {"compare", "--scenario " + eff + " compare-schemes --target-db 30"},
        {"fit-crossing", "fit --trace " + q(data + "/crossing_branches.txt") +
                             " --kind crossing"},
        {"fit-microwave", "fit --trace " + q(data + "/microwave_reflection.txt") +
                              " --kind microwave-reflection --split contrast"},
        {"fit-optical", "fit --trace " + q(data + "/optical_reflection.txt") +
                            " --kind optical-reflection --split critical"},
        {"validate", "--scenario " + eff + " scenario validate"},
    };

    int identical = 0;
    for (const auto& [tag, args] : commands) {
        const fs::path out_a = dir / (tag + "_a");
        const fs::path out_b = dir / (tag + "_b");
        for (const fs::path& out : {out_a, out_b}) {
            const std::string cmd = q(cli) + " " + args + " --out " +
                                    q(out.string()) + " >/dev/null 2>&1";
            if (std::system(cmd.c_str()) != 0)
                return {false, "nonzero exit: " + tag};
        }
        const std::string bytes = read_file(out_a);
        if (bytes.empty()) return {false, "empty output: " + tag};
        if (bytes != read_file(out_b)) return {false, "rerun differs: " + tag};
        ++identical;
    }
    return {true, fmt("%d CLI commands byte-identical on rerun "
                      "(point/sweep/compare/fit/validate)",
                      identical)};
}

} // namespace

int main() {
    const std::vector<std::pair<int, std::function<Outcome()>>> criteria = {
        {1, c1_working_point},        {2, c2_coupling_inference},
        {3, c3_cooperativity},        {4, c4_pump_penalty},
        {5, c5_suppression_identity}, {6, c6_crossing_fit},
        {7, c7_sideband_selection_sweep}, {8, c8_depletion_knee},
        {9, c9_fit_round_trips},      {10, c10_air_gap},
        {11, c11_cli_determinism},
    };

    int failures = 0;
    for (const auto& [id, body] : criteria) {
        Outcome outcome;
        try {
            outcome = body();
        } catch (const std::exception& e) {
            outcome = {false, std::string("threw: ") + e.what()};
        }
        if (!outcome.first) ++failures;
        std::printf("[%s] criterion %2d: %s\n", outcome.first ? "PASS" : "FAIL",
                    id, outcome.second.c_str());
    }
    std::printf("%d/11 criteria passed\n",
                static_cast<int>(criteria.size()) - failures);
    return failures;
}
