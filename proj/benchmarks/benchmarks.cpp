// Microbenchmarks for the conversion hot paths: the closed-form evaluator,
// the nonlinear steady-state solver, the trace fitters and a full sweep.

#include <benchmark/benchmark.h>

#include <cmath>
#include <complex>
#include <sstream>
#include <string>

#include "eoconv/cmt.hpp"
#include "eoconv/constants.hpp"
#include "eoconv/dispersion.hpp"
#include "eoconv/fitlab.hpp"
#include "eoconv/harness.hpp"
#include "eoconv/modes.hpp"
#include "eoconv/scenario.hpp"

namespace {

using namespace eoconv;

ConverterSystem make_system() {
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

std::string scenario_text() {
    return "[meta]\n"
           "name = bench\n"
           "version = 1\n"
           "[optical_pump]\n"
           "frequency_hz = 193.5e12\n"
           "gamma_hz = 346e3\n"
           "gamma_prime_hz = 346e3\n"
           "azimuthal_m = 20820\n"
           "[microwave]\n"
           "frequency_hz = 8.941e9\n"
           "gamma_hz = 3.6e6\n"
           "gamma_prime_hz = 16.2e6\n"
           "eps_r = 28\n"
           "[coupling]\n"
           "g_hz = 7.43\n"
           "[drive]\n"
           "pump_power_w = 0.42e-3\n"
           "microwave_power_dbm = -30\n";
}

void bm_undepleted_formula(benchmark::State& state) {
    const ConverterSystem sys = make_system();
    for (auto _ : state) {
        benchmark::DoNotOptimize(sideband_powers_undepleted(sys));
    }
}
BENCHMARK(bm_undepleted_formula);

void bm_steady_state_solve(benchmark::State& state) {
    const ConverterSystem sys = make_system();
    for (auto _ : state) {
        benchmark::DoNotOptimize(solve_steady_state(sys));
    }
}
BENCHMARK(bm_steady_state_solve);

void bm_lorentzian_fit(benchmark::State& state) {
    MicrowaveMode mode;
    mode.omega0 = hz_to_angular(8.90e9);
    mode.gamma = hz_to_angular(3.29e6);
    mode.gamma_prime = hz_to_angular(14.80e6);
    SpectrumTrace trace;
    trace.kind = TraceKind::MicrowaveReflection;
    trace.x_label = "frequency_hz";
    trace.y_label = "power_reflection";
    for (int i = 0; i < 601; ++i) {
        const double nu = 8.90e9 - 90e6 + 300e3 * i;
        trace.x.push_back(nu);
        trace.y.push_back(std::norm(microwave_reflection(mode, hz_to_angular(nu))));
    }
    LinewidthSplit split;
    split.rule = LinewidthSplit::Rule::DipContrast;
    for (auto _ : state) {
        benchmark::DoNotOptimize(fit_lorentzian(trace, split));
    }
}
BENCHMARK(bm_lorentzian_fit);

void bm_crossing_fit(benchmark::State& state) {
    const CrossingModel model{
        BareMode{193.414e12, -2.7e9, 27.88, Polarization::TE},
        BareMode{193.414e12, -1.5e9, 27.88, Polarization::TM},
        5.27e6,
    };
    SpectrumTrace trace;
    trace.kind = TraceKind::Crossing;
    trace.x_label = "temperature_c";
    trace.y_label = "frequency_hz";
    for (int i = 0; i < 241; ++i) {
        const double t = 27.82 + 0.0005 * i;
        const HybridPair pair = hybridized_frequencies(model, t);
        trace.x.push_back(t);
        trace.y.push_back(pair.upper);
        trace.y2.push_back(pair.lower);
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(fit_avoided_crossing(trace));
    }
}
BENCHMARK(bm_crossing_fit);

void bm_scenario_build(benchmark::State& state) {
    const std::string text = scenario_text();
    for (auto _ : state) {
        std::istringstream in(text);
        benchmark::DoNotOptimize(build_scenario(parse_scenario(in, "bench")));
    }
}
BENCHMARK(bm_scenario_build);

void bm_frequency_sweep(benchmark::State& state) {
    const std::string text =
        scenario_text() +
        "[sweep]\nvariable = microwave_frequency\nstart = 8.90e9\nstop = 8.99e9\n"
        "step = 200e3\noutputs = p_plus_w,p_minus_w\n";
    std::istringstream in(text);
    const BuiltScenario built = build_scenario(parse_scenario(in, "bench"));
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_sweep(built, false));
    }
}
BENCHMARK(bm_frequency_sweep);

void bm_depleted_power_sweep(benchmark::State& state) {
    const std::string text =
        scenario_text() +
        "[sweep]\nvariable = microwave_power\nunit = dbm\nstart = -54\nstop = -22\n"
        "step = 1\noutputs = p_plus_w,p_plus_w_depleted\n";
    std::istringstream in(text);
    const BuiltScenario built = build_scenario(parse_scenario(in, "bench"));
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_sweep(built, true));
    }
}
BENCHMARK(bm_depleted_power_sweep);

} // namespace

BENCHMARK_MAIN();
