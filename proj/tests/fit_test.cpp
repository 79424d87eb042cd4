#include <doctest.h>

#include <cmath>
#include <complex>

#include "eoconv/constants.hpp"
#include "eoconv/dispersion.hpp"
#include "eoconv/fitlab.hpp"
#include "eoconv/lm.hpp"
#include "test_support.hpp"

using namespace eoconv;
using eoconv::testing::rel_diff;

namespace {

// Noiseless reflection trace from the forward model.
SpectrumTrace optical_trace(double nu0, double gamma_hz, double gamma_prime_hz,
                            double mode_matching) {
    SpectrumTrace trace;
    trace.kind = TraceKind::OpticalReflection;
    trace.x_label = "frequency_hz";
    trace.y_label = "reflection";
    for (int i = 0; i < 401; ++i) {
        const double nu = nu0 - 10e6 + 50e3 * i;
        trace.x.push_back(nu);
        trace.y.push_back(optical_reflection(
            hz_to_angular(nu), hz_to_angular(nu0), hz_to_angular(gamma_hz),
            hz_to_angular(gamma_prime_hz), mode_matching));
    }
    return trace;
}

SpectrumTrace microwave_trace(double nu0, double gamma_hz, double gamma_prime_hz) {
    MicrowaveMode mode;
    mode.omega0 = hz_to_angular(nu0);
    mode.gamma = hz_to_angular(gamma_hz);
    mode.gamma_prime = hz_to_angular(gamma_prime_hz);
    SpectrumTrace trace;
    trace.kind = TraceKind::MicrowaveReflection;
    trace.x_label = "frequency_hz";
    trace.y_label = "power_reflection";
    for (int i = 0; i < 601; ++i) {
        const double nu = nu0 - 90e6 + 300e3 * i;
        trace.x.push_back(nu);
        trace.y.push_back(std::norm(microwave_reflection(mode, hz_to_angular(nu))));
    }
    return trace;
}

SpectrumTrace crossing_trace(const CrossingModel& model) {
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
    return trace;
}

} // namespace

TEST_CASE("levenberg-marquardt solves a linear model exactly") {
    // y = 3x - 2 sampled at 20 points; residual is affine in the parameters.
    const auto residual = [](const Eigen::VectorXd& p, Eigen::VectorXd& r) {
        for (int i = 0; i < 20; ++i) {
            const double x = 0.1 * i;
            r[i] = p[0] * x + p[1] - (3.0 * x - 2.0);
        }
    };
    Eigen::VectorXd p0(2);
    p0 << 0.0, 0.0;
    const LmResult lm = levenberg_marquardt(residual, 20, p0);
    CHECK(lm.converged);
    CHECK(rel_diff(lm.params[0], 3.0) < 1e-9);
    CHECK(rel_diff(lm.params[1], -2.0) < 1e-9);
    CHECK(lm.sse < 1e-18);
}

TEST_CASE("levenberg-marquardt handles a curved valley") {
    // Rosenbrock in least-squares form: r = (1 - a, 10 (b - a^2)).
    const auto residual = [](const Eigen::VectorXd& p, Eigen::VectorXd& r) {
        r[0] = 1.0 - p[0];
        r[1] = 10.0 * (p[1] - p[0] * p[0]);
    };
    Eigen::VectorXd p0(2);
    p0 << -1.2, 1.0;
    const LmResult lm = levenberg_marquardt(residual, 2, p0);
    CHECK(lm.converged);
    CHECK(std::abs(lm.params[0] - 1.0) < 1e-6);
    CHECK(std::abs(lm.params[1] - 1.0) < 1e-6);
}

TEST_CASE("optical dip round-trips through the fitter") {
    const SpectrumTrace trace = optical_trace(193.5e12, 346e3, 346e3, 0.6);
    LinewidthSplit split;
    split.rule = LinewidthSplit::Rule::CriticallyCoupled;
    const FitReport report = fit_lorentzian(trace, split);

    CHECK(rel_diff(report.value("center_hz"), 193.5e12) < 1e-9);
    CHECK(rel_diff(report.value("fwhm_hz"), 2.0 * 692e3) < 1e-6);
    CHECK(rel_diff(report.value("gamma_hz"), 346e3) < 1e-6);
    CHECK(rel_diff(report.value("mode_matching"), 0.6) < 1e-6);
}

TEST_CASE("known-mode-matching split resolves the two half-widths") {
    // Undercoupled optical dip: gamma 200 kHz, gamma' 500 kHz, matching 0.8.
    const SpectrumTrace trace = optical_trace(193.5e12, 200e3, 500e3, 0.8);
    LinewidthSplit split;
    split.rule = LinewidthSplit::Rule::KnownModeMatching;
    split.mode_matching = 0.8;
    split.side = CouplingSide::Undercoupled;
    const FitReport report = fit_lorentzian(trace, split);
    CHECK(rel_diff(report.value("gamma_hz"), 200e3) < 1e-6);
    CHECK(rel_diff(report.value("gamma_prime_hz"), 500e3) < 1e-6);

    // The overcoupled root swaps the two rates.
    split.side = CouplingSide::Overcoupled;
    const FitReport swapped = fit_lorentzian(trace, split);
    CHECK(rel_diff(swapped.value("gamma_hz"), 500e3) < 1e-6);
}

TEST_CASE("microwave dip recovers rates, linewidth and loaded quality factor") {
    const SpectrumTrace trace = microwave_trace(8.90e9, 3.29e6, 14.80e6);
    LinewidthSplit split;
    split.rule = LinewidthSplit::Rule::DipContrast;
    split.side = CouplingSide::Undercoupled;
    const FitReport report = fit_lorentzian(trace, split);

    CHECK(rel_diff(report.value("fwhm_hz"), 36.18e6) < 1e-6);
    CHECK(rel_diff(report.value("gamma_hz"), 3.29e6) < 1e-6);
    CHECK(rel_diff(report.value("gamma_prime_hz"), 14.80e6) < 1e-6);
    CHECK(report.value("loaded_q") == doctest::Approx(246.0).epsilon(5e-3));
}

TEST_CASE("crossing fit round-trips the generating model") {
    const CrossingModel model{
        BareMode{193.414e12, -2.7e9, 27.88, Polarization::TE},
        BareMode{193.414e12, -1.5e9, 27.88, Polarization::TM},
        5.27e6,
    };
    const FitReport report = fit_avoided_crossing(crossing_trace(model));

    CHECK(rel_diff(report.value("kappa_hz"), 5.27e6) < 1e-6);
    CHECK(rel_diff(report.value("min_splitting_hz"), 2.0 * 5.27e6) < 1e-6);
    CHECK(rel_diff(report.value("slope_ratio"), 1.8) < 1e-6);
    CHECK(std::abs(report.value("crossing_temperature_c") - 27.88) < 1e-6);
    CHECK(report.warnings.empty());
}

TEST_CASE("reflection phase excursion classifies the coupling") {
    MicrowaveMode mode;
    mode.omega0 = hz_to_angular(8.9e9);

    mode.gamma = hz_to_angular(3e6);
    mode.gamma_prime = hz_to_angular(15e6);
    CHECK(reflection_phase_excursion(mode) ==
          doctest::Approx(2.0 * std::asin(3.0 / 15.0)).epsilon(1e-12));

    mode.gamma = hz_to_angular(15e6);
    mode.gamma_prime = hz_to_angular(3e6);
    CHECK(reflection_phase_excursion(mode) == doctest::Approx(kTwoPi).epsilon(1e-12));

    mode.gamma = mode.gamma_prime;
    CHECK(reflection_phase_excursion(mode) == doctest::Approx(kPi).epsilon(1e-12));
}

TEST_CASE("microwave reflection magnitude is a lorentzian dip") {
    MicrowaveMode mode;
    mode.omega0 = hz_to_angular(8.9e9);
    mode.gamma = hz_to_angular(4e6);
    mode.gamma_prime = hz_to_angular(18e6);
    const double tot = mode.total_rate();
    for (const double delta : {0.0, 0.3 * tot, -2.0 * tot, 11.0 * tot}) {
        const double got = std::norm(microwave_reflection(mode, mode.omega0 + delta));
        const double expect = 1.0 - 4.0 * mode.gamma * mode.gamma_prime /
                                        (delta * delta + tot * tot);
        CHECK(rel_diff(got, expect) < 1e-12);
    }
}

TEST_CASE("fitting a flat trace is rejected") {
    SpectrumTrace trace;
    trace.kind = TraceKind::OpticalReflection;
    trace.x_label = "frequency_hz";
    trace.y_label = "reflection";
    for (int i = 0; i < 64; ++i) {
        trace.x.push_back(193.5e12 + 1e5 * i);
        trace.y.push_back(1.0);
    }
    CHECK_THROWS_AS((void)fit_lorentzian(trace), IllConditioned);
}
