#include <doctest.h>

#include <cmath>

#include "eoconv/constants.hpp"
#include "eoconv/coupling.hpp"
#include "test_support.hpp"

using namespace eoconv;
using eoconv::testing::rel_diff;

namespace {

ProfileGrid rim_grid() {
    ProfileGrid grid;
    grid.r0 = 2.35e-3;
    grid.z0 = -60e-6;
    grid.dr = 1e-6;
    grid.dz = 1e-6;
    grid.nr = 200;
    grid.nz = 120;
    return grid;
}

} // namespace

TEST_CASE("uniform-field coupling reproduces the closed form") {
    const double r33 = 31e-12;
    const double omega_p = hz_to_angular(193.5e12);
    const double e = 2.0386e-3;

    // n^2 omega r33 E / 2 for lithium niobate at 1550 nm gives 2pi x 28 Hz.
    const double g = g_simplified(2.14, omega_p, r33, e);
    CHECK(rel_diff(g, hz_to_angular(28.0)) < 2e-3);

    const ProfileGrid grid = rim_grid();
    const FieldProfile pump = gaussian_wgm_profile(grid, 2.45e-3, 8e-6, 4e-6);
    const FieldProfile mw = uniform_profile(grid, e);
    const double g_overlap = g_from_overlap(pump, pump, mw, 2.14, 2.14, omega_p, r33);
    CHECK(rel_diff(g_overlap, g) < 1e-12);
}

TEST_CASE("overlap integrals agree with analytic values on a uniform patch") {
    ProfileGrid grid;
    grid.r0 = 1.0;
    grid.z0 = 0.0;
    grid.dr = 0.01;
    grid.dz = 0.02;
    grid.nr = 100; // r in [1, 2]
    grid.nz = 50;  // z in [0, 1]
    const FieldProfile ones = uniform_profile(grid, 1.0);

    // 2*pi * int_1^2 r dr * int_0^1 dz = pi * (4 - 1) = 3*pi; the midpoint
    // rule is exact for a linear integrand.
    CHECK(rel_diff(cylindrical_norm(ones), 3.0 * kPi) < 1e-12);

    const FieldProfile half = uniform_profile(grid, 0.5);
    const std::complex<double> overlap = cylindrical_overlap(ones, half, ones);
    CHECK(rel_diff(overlap.real(), 1.5 * kPi) < 1e-12);
    CHECK(overlap.imag() == 0.0);
}

TEST_CASE("mismatched grids are rejected") {
    const ProfileGrid grid = rim_grid();
    ProfileGrid other = grid;
    other.dr = 2e-6;
    const FieldProfile a = uniform_profile(grid, 1.0);
    const FieldProfile b = uniform_profile(other, 1.0);
    CHECK_THROWS_AS((void)cylindrical_overlap(a, b, a), GridMismatch);
}

TEST_CASE("single-photon field and mode volume are mutually inverse") {
    const double omega = hz_to_angular(8.941e9);
    const double eps_r = 28.0;
    const double volume = 2.862e-9;
    const double e = single_photon_field(omega, eps_r, volume);
    CHECK(e > 0.0);
    CHECK(rel_diff(mode_volume_from_field(omega, eps_r, e), volume) < 1e-12);
    // Direct value: sqrt(hbar*omega / (2 eps0 eps_r V)).
    const double expected =
        std::sqrt(kHbar * omega / (2.0 * kEps0 * eps_r * volume));
    CHECK(e == doctest::Approx(expected).epsilon(1e-15));
}

TEST_CASE("air gap factor: series-capacitor field reduction") {
    // 0.4 mm disc over a 20 um gap at eps_r 28 roughly halves the field.
    const double factor = air_gap_factor(0.4e-3, 20e-6, 28.0);
    CHECK(factor == doctest::Approx(0.4 / 0.96).epsilon(1e-12));
    CHECK(air_gap_factor(0.4e-3, 0.0, 28.0) == 1.0);
    CHECK_THROWS_AS((void)air_gap_factor(0.0, 20e-6, 28.0), DomainError);
}

TEST_CASE("thickness rescaling follows the inverse-root volume law") {
    const double g = hz_to_angular(28.0);
    CHECK(rescale_g_for_thickness(g, 0.5e-3, 0.125e-3) ==
          doctest::Approx(2.0 * g).epsilon(1e-12));
    CHECK(rescale_g_for_thickness(g, 0.5e-3, 0.5e-3) == g);
}

TEST_CASE("azimuthal selection rule") {
    const auto [plus, minus] = phase_matched_indices(20820, 1);
    CHECK(plus == 20821);
    CHECK(minus == 20819);
    CHECK(is_phase_matched(20820, 20821, 1, Sideband::Plus));
    CHECK(!is_phase_matched(20820, 20822, 1, Sideband::Plus));
    CHECK(is_phase_matched(20820, 20819, 1, Sideband::Minus));
}

TEST_CASE("profile validation") {
    ProfileGrid grid = rim_grid();
    CHECK_NOTHROW(grid.validate());
    grid.nr = 0;
    CHECK_THROWS_AS(grid.validate(), DomainError);

    FieldProfile profile = uniform_profile(rim_grid(), 1.0);
    profile.values.pop_back();
    CHECK_THROWS_AS(profile.validate(), GridMismatch);
}
