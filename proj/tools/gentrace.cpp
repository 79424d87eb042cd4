// Generates the bundled synthetic traces in tools/data/.  Fixed seed and a
// hand-rolled Box-Muller transform keep the output bit-stable across
// standard libraries; the committed files are the reference copies.
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <numbers>
#include <random>
#include <string>

#include "eoconv/constants.hpp"
#include "eoconv/dispersion.hpp"
#include "eoconv/fitlab.hpp"
#include "eoconv/io.hpp"
#include "eoconv/modes.hpp"

namespace {

struct GaussianSource {
    std::mt19937_64 rng;

    explicit GaussianSource(std::uint64_t seed) : rng(seed) {}

    double uniform() { // open (0,1)
        return (static_cast<double>(rng() >> 11) + 0.5) * 0x1p-53;
    }

    double operator()() {
        const double u = uniform();
        const double v = uniform();
        return std::sqrt(-2.0 * std::log(u)) *
               std::cos(2.0 * std::numbers::pi * v);
    }
};

// Avoided-crossing branches around 27.88 C.  Slopes -2.7/-1.5 GHz/K, kappa
// 5.27 MHz; noise sigma = (2 kappa)/50, i.e. SNR 50 on the minimum splitting.
void write_crossing(const std::string& dir) {
    using namespace eoconv;
    const double nu0 = 193.414e12;
    const CrossingModel model{
        BareMode{nu0, -2.7e9, 27.88, Polarization::TE},
        BareMode{nu0, -1.5e9, 27.88, Polarization::TM},
        5.27e6,
    };
    GaussianSource noise(0x5eed0003);
    const double sigma = 2.0 * model.kappa / 50.0;

    SpectrumTrace trace;
    trace.kind = TraceKind::Crossing;
    trace.x_label = "temperature_c";
    trace.y_label = "frequency_hz";
    const int n = 241;
    for (int i = 0; i < n; ++i) {
        const double t = 27.82 + 0.0005 * i;
        const HybridPair pair = hybridized_frequencies(model, t);
        trace.x.push_back(t);
        trace.y.push_back(pair.upper + sigma * noise());
        trace.y2.push_back(pair.lower + sigma * noise());
    }
    write_trace(dir + "/crossing_branches.txt", trace);
}

// Critically coupled optical dip at 193.5 THz with 60% spatial mode
// matching: gamma = gamma' = 346 kHz, dip depth 0.6.
void write_optical(const std::string& dir) {
    using namespace eoconv;
    const double nu0 = 193.5e12;
    const double gamma = 346e3;
    GaussianSource noise(0x5eed0001);

    SpectrumTrace trace;
    trace.kind = TraceKind::OpticalReflection;
    trace.x_label = "frequency_hz";
    trace.y_label = "reflection";
    const int n = 601;
    for (int i = 0; i < n; ++i) {
        const double nu = nu0 - 15e6 + 50e3 * i;
        const double r =
            optical_reflection(hz_to_angular(nu), hz_to_angular(nu0),
                               hz_to_angular(gamma), hz_to_angular(gamma), 0.6);
        trace.x.push_back(nu);
        trace.y.push_back(r + 0.002 * noise());
    }
    write_trace(dir + "/optical_reflection.txt", trace);
}

// Undercoupled microwave dip at 8.90 GHz: gamma 3.29 MHz, gamma' 14.80 MHz,
// FWHM 36.18 MHz, loaded Q about 246.
void write_microwave(const std::string& dir) {
    using namespace eoconv;
    MicrowaveMode mode;
    mode.omega0 = hz_to_angular(8.90e9);
    mode.gamma = hz_to_angular(3.29e6);
    mode.gamma_prime = hz_to_angular(14.80e6);
    GaussianSource noise(0x5eed0002);

    SpectrumTrace trace;
    trace.kind = TraceKind::MicrowaveReflection;
    trace.x_label = "frequency_hz";
    trace.y_label = "power_reflection";
    const int n = 721;
    for (int i = 0; i < n; ++i) {
        const double nu = 8.90e9 - 90e6 + 250e3 * i;
        const double r = std::norm(microwave_reflection(mode, hz_to_angular(nu)));
        trace.x.push_back(nu);
        trace.y.push_back(r + 0.002 * noise());
    }
    write_trace(dir + "/microwave_reflection.txt", trace);
}

} // namespace

int main(int argc, char** argv) {
    const std::string dir = argc > 1 ? argv[1] : ".";
    try {
        std::filesystem::create_directories(dir);
        write_crossing(dir);
        write_optical(dir);
        write_microwave(dir);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "gentrace: %s\n", e.what());
        return 1;
    }
    std::printf("wrote 3 traces to %s\n", dir.c_str());
    return 0;
}
