#include <doctest.h>

#include <cmath>

#include "eoconv/dispersion.hpp"
#include "test_support.hpp"

using namespace eoconv;
using eoconv::testing::rel_diff;

namespace {

// TE/TM pair crossing at 27.88 C with kappa = 5.27 MHz; slope ratio 1.8.
CrossingModel fig_crossing() {
    return CrossingModel{
        BareMode{193.414e12, -2.7e9, 27.88, Polarization::TE},
        BareMode{193.414e12, -1.5e9, 27.88, Polarization::TM},
        5.27e6,
    };
}

// Three-rung TE ladder around the pump with the + step hybridized: the TM
// partner sits tm_offset above the bare TE rung at 27.88 C, which puts the
// tracked upper branch exactly 18.1 MHz above the bare step there.
ModeLadder fig_ladder() {
    const double nu_p = 193.5e12;
    const double fsr = 8.9474e9;
    const double tm_offset = 16565585.635359116;
    ModeLadder ladder;
    ladder.pump_m = 20820;
    ladder.family = Polarization::TE;
    ladder.entries = {
        {20819, BareMode{nu_p - fsr, -2.7e9, 27.88, Polarization::TE}},
        {20820, BareMode{nu_p, -2.7e9, 27.88, Polarization::TE}},
        {20821,
         CrossingModel{BareMode{nu_p + fsr, -2.7e9, 27.88, Polarization::TE},
                       BareMode{nu_p + fsr + tm_offset, -1.5e9, 27.88,
                                Polarization::TM},
                       5.27e6}},
    };
    return ladder;
}

} // namespace

TEST_CASE("minimum splitting at the crossing equals twice the coupling") {
    const CrossingModel model = fig_crossing();
    const double tc = crossing_temperature(model);
    CHECK(tc == doctest::Approx(27.88).epsilon(1e-12));

    const HybridPair at_crossing = hybridized_frequencies(model, 27.88);
    CHECK(at_crossing.upper - at_crossing.lower == 2.0 * model.kappa); // exact

    // Splitting grows monotonically away from the crossing.
    const HybridPair off = hybridized_frequencies(model, 27.9);
    CHECK(off.upper - off.lower > 2.0 * model.kappa);
}

TEST_CASE("branch sum equals the bare sum at ten thousand temperatures") {
    const CrossingModel model = fig_crossing();
    for (int i = 0; i < 10000; ++i) {
        const double t = 27.0 + 1.8 * i / 9999.0;
        const HybridPair pair = hybridized_frequencies(model, t);
        const double bare_sum =
            model.mode_a.frequency_at(t) + model.mode_b.frequency_at(t);
        CHECK(rel_diff(pair.upper + pair.lower, bare_sum) < 1e-9);
    }
}

TEST_CASE("tracked branch follows the right asymptotes") {
    const CrossingModel model = fig_crossing();
    // Steeper TE means the TE bare line approaches from above: the TE-like
    // branch is the upper one.
    const double far_left = 27.0;
    const double far_right = 28.8;
    const double te_left = model.mode_a.frequency_at(far_left);
    const double tm_right = model.mode_b.frequency_at(far_right);
    const double track_left = tracked_branch(model, far_left, BranchKind::TeLike);
    const double track_right = tracked_branch(model, far_right, BranchKind::TeLike);
    // Far from the crossing the level repulsion is second order in kappa/delta.
    const double delta_left = std::abs(model.mode_a.frequency_at(far_left) -
                                       model.mode_b.frequency_at(far_left));
    CHECK(std::abs(track_left - te_left) < 2.0 * model.kappa * model.kappa / delta_left);
    CHECK(std::abs(track_right - tm_right) <
          2.0 * model.kappa * model.kappa / delta_left);
    CHECK(track_left > te_left);   // repelled upward
    CHECK(track_right > tm_right); // still the upper branch
}

TEST_CASE("crossing model validation") {
    CrossingModel model = fig_crossing();
    CHECK_NOTHROW(model.validate());
    model.kappa = -1.0;
    CHECK_THROWS_AS(model.validate(), DomainError);
    model = fig_crossing();
    model.mode_b.polarization = Polarization::TE;
    CHECK_THROWS_AS(model.validate(), DomainError);
    model = fig_crossing();
    model.mode_b.slope = model.mode_a.slope;
    CHECK_THROWS_AS((void)crossing_temperature(model), DegenerateSlopes);
}

TEST_CASE("ladder spacings and their asymmetry at the working point") {
    const ModeLadder ladder = fig_ladder();
    CHECK_NOTHROW(ladder.validate());

    const FsrPair fsr = fsr_pair(ladder, 27.88);
    CHECK(fsr.fsr_minus == doctest::Approx(8.9474e9).epsilon(1e-12));
    CHECK(fsr.asymmetry() == doctest::Approx(18.1e6).epsilon(1e-9));

    // All-TE spacing below the pump is temperature independent.
    const FsrPair cold = fsr_pair(ladder, 27.5);
    CHECK(cold.fsr_minus == doctest::Approx(fsr.fsr_minus).epsilon(1e-12));
    CHECK(cold.asymmetry() < fsr.asymmetry()); // crossing further away
}

TEST_CASE("ladder validation rejects malformed ladders") {
    ModeLadder ladder = fig_ladder();
    ladder.entries.erase(ladder.entries.begin());
    CHECK_THROWS_AS(ladder.validate(), DomainError); // pump m-1 rung missing

    ladder = fig_ladder();
    std::swap(ladder.entries[0].m, ladder.entries[1].m);
    CHECK_THROWS_AS(ladder.validate(), DomainError); // m not increasing
}

TEST_CASE("operating temperature search finds the configured asymmetry") {
    const ModeLadder ladder = fig_ladder();
    const TemperatureSearchResult root =
        find_operating_temperature(ladder, 18.1e6, 27.4, 28.3);
    CHECK(std::abs(root.temperature_c - 27.88) < 1e-3);
    CHECK(!root.all_roots_c.empty());

    const FsrPair at_root = fsr_pair(ladder, root.temperature_c);
    CHECK(rel_diff(at_root.asymmetry(), 18.1e6) < 1e-4);

    // The asymmetry never reaches 1 GHz inside this bracket.
    CHECK_THROWS_AS(
        (void)find_operating_temperature(ladder, 1e9, 27.4, 28.3),
        NoRootInBracket);
}
