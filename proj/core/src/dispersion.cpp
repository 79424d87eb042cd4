#include "eoconv/dispersion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace eoconv {

namespace {

// True when the branch adiabatically connected to `sel` (far below the
// crossing) is the upper eigenbranch.  With delta = nu_sel - nu_oth, the
// selected branch sits on the sign of delta at t -> -inf, which is the sign
// of -(slope_sel - slope_oth).
bool selected_is_upper(const BareMode& sel, const BareMode& oth) {
    const double diff = sel.slope - oth.slope;
    const double scale = std::max(std::abs(sel.slope), std::abs(oth.slope));
    if (std::abs(diff) <= 1e-12 * scale)
        throw DegenerateSlopes("thermal slopes are equal; branches are not "
                               "asymptotically distinguishable");
    return diff < 0.0;
}

const BareMode& select_mode(const CrossingModel& model, BranchKind which) {
    const Polarization want =
        which == BranchKind::TeLike ? Polarization::TE : Polarization::TM;
    if (model.mode_a.polarization == want) return model.mode_a;
    return model.mode_b;
}

const BareMode& other_mode(const CrossingModel& model, const BareMode& sel) {
    return &sel == &model.mode_a ? model.mode_b : model.mode_a;
}

} // namespace

HybridPair hybridized_frequencies(const CrossingModel& model, double t_c) {
    model.validate();
    const double nu_a = model.mode_a.frequency_at(t_c);
    const double nu_b = model.mode_b.frequency_at(t_c);
    const double mean = 0.5 * (nu_a + nu_b);
    const double delta = nu_a - nu_b;
    const double shift = std::sqrt(model.kappa * model.kappa + 0.25 * delta * delta);
    return {mean + shift, mean - shift};
}

double crossing_temperature(const CrossingModel& model) {
    model.validate();
    const double dslope = model.mode_a.slope - model.mode_b.slope;
    const double scale =
        std::max(std::abs(model.mode_a.slope), std::abs(model.mode_b.slope));
    if (std::abs(dslope) <= 1e-12 * scale)
        throw DegenerateSlopes("equal thermal slopes: bare modes never cross");
    // nu_a(t) = nu_b(t)  =>  solve the linear equation for t.
    const double delta_ref = model.mode_a.frequency_at(0.0) - model.mode_b.frequency_at(0.0);
    return -delta_ref / dslope;
}

double tracked_branch(const CrossingModel& model, double t_c, BranchKind which) {
    model.validate();
    const BareMode& sel = select_mode(model, which);
    const BareMode& oth = other_mode(model, sel);
    if (sel.polarization == oth.polarization)
        throw DomainError("crossing modes must have distinct polarizations");
    const HybridPair pair = hybridized_frequencies(model, t_c);
    return selected_is_upper(sel, oth) ? pair.upper : pair.lower;
}

void ModeLadder::validate() const {
    if (entries.size() < 3)
        throw DomainError("mode ladder needs at least three entries");
    for (std::size_t i = 1; i < entries.size(); ++i) {
        if (entries[i].m <= entries[i - 1].m)
            throw DomainError("ladder entries must be sorted by strictly "
                              "increasing azimuthal number");
    }
    bool found[3] = {false, false, false};
    for (const auto& entry : entries) {
        const std::int64_t rel = entry.m - pump_m;
        if (rel >= -1 && rel <= 1) found[rel + 1] = true;
        if (const auto* crossing = std::get_if<CrossingModel>(&entry.model)) {
            crossing->validate();
            if (crossing->mode_a.polarization != family &&
                crossing->mode_b.polarization != family)
                throw DomainError("crossing entry has no mode in the ladder's "
                                  "polarization family");
        }
    }
    if (!found[0] || !found[1] || !found[2])
        throw DomainError("ladder must contain the pump mode and both first "
                          "neighbours");
}

double ModeLadder::frequency_at(std::int64_t m, double t_c) const {
    for (const auto& entry : entries) {
        if (entry.m != m) continue;
        if (const auto* bare = std::get_if<BareMode>(&entry.model))
            return bare->frequency_at(t_c);
        const auto& crossing = std::get<CrossingModel>(entry.model);
        const BranchKind kind =
            family == Polarization::TE ? BranchKind::TeLike : BranchKind::TmLike;
        return tracked_branch(crossing, t_c, kind);
    }
    throw DomainError("no ladder entry with the requested azimuthal number");
}

FsrPair fsr_pair(const ModeLadder& ladder, double t_c) {
    ladder.validate();
    const double nu_m = ladder.frequency_at(ladder.pump_m, t_c);
    const double nu_up = ladder.frequency_at(ladder.pump_m + 1, t_c);
    const double nu_dn = ladder.frequency_at(ladder.pump_m - 1, t_c);
    return {nu_up - nu_m, nu_m - nu_dn};
}

TemperatureSearchResult find_operating_temperature(const ModeLadder& ladder,
                                                   double target_asymmetry,
                                                   double t_lo_c, double t_hi_c) {
    ladder.validate();
    if (!(t_hi_c > t_lo_c))
        throw DomainError("temperature bracket must satisfy t_lo < t_hi");

    const auto misfit = [&](double t) {
        return fsr_pair(ladder, t).asymmetry() - target_asymmetry;
    };

    // Scan for sign changes before bisecting; several roots can coexist when
    // a crossing sits on one neighbour.
    constexpr int kScanIntervals = 2048;
    const double dt = (t_hi_c - t_lo_c) / kScanIntervals;
    std::vector<double> f(kScanIntervals + 1);
    double f_min = std::numeric_limits<double>::infinity();
    double f_max = -std::numeric_limits<double>::infinity();
    for (int i = 0; i <= kScanIntervals; ++i) {
        f[i] = misfit(t_lo_c + i * dt);
        f_min = std::min(f_min, f[i]);
        f_max = std::max(f_max, f[i]);
    }

    // A misfit that is indistinguishable from zero over the whole bracket has
    // no isolated root: every temperature satisfies the target.
    const double flat_tol = std::max(1.0, 1e-6 * std::abs(target_asymmetry));
    if (std::abs(f_min) <= flat_tol && std::abs(f_max) <= flat_tol)
        throw DegenerateTarget("asymmetry equals the target over the whole "
                               "bracket; the operating temperature is not "
                               "isolated");

    constexpr double kTempTol = 1e-4;     // 0.1 mK
    constexpr double kMisfitTol = 1e3;    // 1 kHz
    const double t_floor =
        8.0 * std::numeric_limits<double>::epsilon() *
        std::max({std::abs(t_lo_c), std::abs(t_hi_c), 1.0});

    TemperatureSearchResult result;
    for (int i = 0; i < kScanIntervals; ++i) {
        double a = t_lo_c + i * dt;
        double b = a + dt;
        double fa = f[i];
        double fb = f[i + 1];
        if (fa == 0.0) {
            if (i == 0) result.all_roots_c.push_back(a);
            continue;
        }
        if (fb == 0.0) {
            result.all_roots_c.push_back(b);
            continue;
        }
        if ((fa > 0.0) == (fb > 0.0)) continue;

        // Bisect to 0.1 mK, then keep halving while the asymmetry misfit at
        // the midpoint is still above 1 kHz and the interval is resolvable.
        double mid = 0.5 * (a + b);
        while (true) {
            mid = 0.5 * (a + b);
            const double fm = misfit(mid);
            if (fm == 0.0) break;
            if ((fm > 0.0) == (fa > 0.0)) {
                a = mid;
                fa = fm;
            } else {
                b = mid;
            }
            const double width = b - a;
            if (width <= kTempTol && std::abs(fm) <= kMisfitTol) break;
            if (width <= t_floor) break;
        }
        result.all_roots_c.push_back(mid);
    }

    if (result.all_roots_c.empty())
        throw NoRootInBracket("no temperature in the bracket reaches the "
                              "requested free-spectral-range asymmetry");
    std::sort(result.all_roots_c.begin(), result.all_roots_c.end());
    result.temperature_c = result.all_roots_c.front();
    return result;
}

} // namespace eoconv
