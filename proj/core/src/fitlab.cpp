#include "eoconv/fitlab.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Dense>

#include "eoconv/constants.hpp"
#include "eoconv/lm.hpp"

namespace eoconv {

namespace {

struct LineSeed {
    double value_at_anchor = 0.0;
    double slope = 0.0;
};

// Least-squares line through (x, v), reported at x = anchor.
LineSeed fit_line(const std::vector<double>& x, const std::vector<double>& v,
                  std::size_t begin, std::size_t end, double anchor) {
    double sx = 0.0, sv = 0.0, sxx = 0.0, sxv = 0.0;
    const double n = static_cast<double>(end - begin);
    for (std::size_t i = begin; i < end; ++i) {
        const double xi = x[i] - anchor;
        sx += xi;
        sv += v[i];
        sxx += xi * xi;
        sxv += xi * v[i];
    }
    const double det = n * sxx - sx * sx;
    LineSeed seed;
    if (std::abs(det) < 1e-300) {
        seed.value_at_anchor = sv / n;
        seed.slope = 0.0;
    } else {
        seed.slope = (n * sxv - sx * sv) / det;
        seed.value_at_anchor = (sv - seed.slope * sx) / n;
    }
    return seed;
}

double median_of(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

double sigma_from(const Eigen::MatrixXd& cov, Eigen::Index k) {
    if (cov.rows() <= k || !std::isfinite(cov(k, k)) || cov(k, k) < 0.0) return 0.0;
    return std::sqrt(cov(k, k));
}

} // namespace

std::string_view to_string(TraceKind kind) {
    switch (kind) {
        case TraceKind::OpticalReflection: return "optical-reflection";
        case TraceKind::MicrowaveReflection: return "microwave-reflection";
        case TraceKind::Crossing: return "crossing";
    }
    return "unknown";
}

TraceKind trace_kind_from_string(std::string_view text) {
    if (text == "optical-reflection") return TraceKind::OpticalReflection;
    if (text == "microwave-reflection") return TraceKind::MicrowaveReflection;
    if (text == "crossing") return TraceKind::Crossing;
    throw DomainError("unknown trace kind: " + std::string(text));
}

void SpectrumTrace::validate() const {
    if (x.size() < 4) throw DomainError("trace needs at least four samples");
    if (y.size() != x.size()) throw DomainError("trace x/y size mismatch");
    if (!y2.empty() && y2.size() != x.size())
        throw DomainError("trace second-branch size mismatch");
    if (!y2.empty() && kind != TraceKind::Crossing)
        throw DomainError("second branch only valid for crossing traces");
    for (std::size_t i = 1; i < x.size(); ++i)
        if (!(x[i] > x[i - 1]))
            throw DomainError("trace abscissa must be strictly increasing");
}

const FitValue* FitReport::find(std::string_view name) const {
    for (const auto& entry : params)
        if (entry.name == name) return &entry;
    for (const auto& entry : derived)
        if (entry.name == name) return &entry;
    return nullptr;
}

double FitReport::value(std::string_view name) const {
    const FitValue* entry = find(name);
    if (!entry) throw DomainError("fit report has no entry named " + std::string(name));
    return entry->value;
}

double optical_reflection(double omega, double omega0, double gamma, double gamma_prime,
                          double mode_matching) {
    const double total = gamma + gamma_prime;
    if (!(total > 0.0)) throw NonPositiveLinewidth("reflection model needs gamma + gamma' > 0");
    const double det = omega - omega0;
    return 1.0 - mode_matching * 4.0 * gamma * gamma_prime / (det * det + total * total);
}

std::complex<double> microwave_reflection(const MicrowaveMode& mode, double omega_drive) {
    const double total = mode.total_rate();
    if (!(total > 0.0)) throw NonPositiveLinewidth("reflection model needs gamma + gamma' > 0");
    const std::complex<double> big_gamma{total, -(omega_drive - mode.omega0)};
    return 1.0 - 2.0 * mode.gamma / big_gamma;
}

double reflection_phase_excursion(const MicrowaveMode& mode) {
    const double total = mode.total_rate();
    if (!(total > 0.0)) throw NonPositiveLinewidth("reflection model needs gamma + gamma' > 0");
    // The reflection traces a circle of centre 1 - gamma/(gamma+gamma') and
    // radius gamma/(gamma+gamma'); the phase excursion depends on whether the
    // circle encloses the origin.
    if (mode.gamma < mode.gamma_prime)
        return 2.0 * std::asin(mode.gamma / mode.gamma_prime);
    if (mode.gamma > mode.gamma_prime) return kTwoPi;
    return kPi;
}

FitReport fit_lorentzian(const SpectrumTrace& trace, const LinewidthSplit& split) {
    trace.validate();
    if (trace.kind == TraceKind::Crossing)
        throw DomainError("crossing traces are not reflection dips");
    const std::size_t n = trace.x.size();
    if (n < 6) throw DomainError("dip fit needs at least six samples");

    // Baseline and noise from the outer 20% of the trace.
    const std::size_t edge = std::max<std::size_t>(2, n / 10);
    std::vector<double> outer;
    outer.reserve(2 * edge);
    for (std::size_t i = 0; i < edge; ++i) outer.push_back(trace.y[i]);
    for (std::size_t i = n - edge; i < n; ++i) outer.push_back(trace.y[i]);
    const double baseline0 = median_of(outer);
    double noise_sq = 0.0;
    for (double v : outer) noise_sq += (v - baseline0) * (v - baseline0);
    const double noise = std::sqrt(noise_sq / static_cast<double>(outer.size()));

    const auto idx_min =
        static_cast<std::size_t>(std::min_element(trace.y.begin(), trace.y.end()) -
                                 trace.y.begin());
    const double depth0 = baseline0 - trace.y[idx_min];
    if (!(depth0 > 0.0) || depth0 < 3.0 * noise)
        throw IllConditioned("dip depth is below three times the trace noise");

    // Half-width seed from the half-depth crossings around the minimum.
    const double half_level = baseline0 - 0.5 * depth0;
    std::size_t lo = idx_min;
    while (lo > 0 && trace.y[lo] < half_level) --lo;
    std::size_t hi = idx_min;
    while (hi + 1 < n && trace.y[hi] < half_level) ++hi;
    double hwhm0 = 0.5 * (trace.x[hi] - trace.x[lo]);
    const double span = trace.x.back() - trace.x.front();
    if (!(hwhm0 > 0.0)) hwhm0 = span / 10.0;

    // p = [center, hwhm, depth, baseline]; model b - d h^2 / ((x-c)^2 + h^2).
    Eigen::VectorXd p0(4);
    p0 << trace.x[idx_min], hwhm0, depth0, baseline0;

    const auto residual = [&](const Eigen::VectorXd& p, Eigen::VectorXd& r) {
        const double c = p[0], h = p[1], d = p[2], b = p[3];
        const double h2 = h * h;
        for (std::size_t i = 0; i < n; ++i) {
            const double dx = trace.x[i] - c;
            r[static_cast<Eigen::Index>(i)] = b - d * h2 / (dx * dx + h2) - trace.y[i];
        }
    };
    const auto jacobian = [&](const Eigen::VectorXd& p, Eigen::MatrixXd& jac) {
        const double c = p[0], h = p[1], d = p[2];
        const double h2 = h * h;
        for (std::size_t i = 0; i < n; ++i) {
            const double dx = trace.x[i] - c;
            const double den = dx * dx + h2;
            const auto row = static_cast<Eigen::Index>(i);
            jac(row, 0) = -2.0 * d * h2 * dx / (den * den);
            jac(row, 1) = -2.0 * d * h * dx * dx / (den * den);
            jac(row, 2) = -h2 / den;
            jac(row, 3) = 1.0;
        }
    };

    LmOptions options;
    options.param_scales.resize(4);
    options.param_scales << std::max(span, hwhm0), hwhm0, depth0, 1.0;
    const LmResult lm = levenberg_marquardt(residual, static_cast<int>(n), p0, jacobian,
                                            options);

    const double center = lm.params[0];
    const double hwhm = std::abs(lm.params[1]);
    const double depth = lm.params[2];
    const double base = lm.params[3];

    FitReport report;
    report.kind = trace.kind;
    report.residual_rms = lm.residual_rms;
    report.iterations = lm.iterations;
    report.params = {
        {"center_hz", center, sigma_from(lm.covariance, 0)},
        {"hwhm_hz", hwhm, sigma_from(lm.covariance, 1)},
        {"depth", depth, sigma_from(lm.covariance, 2)},
        {"baseline", base, sigma_from(lm.covariance, 3)},
    };
    if (depth < 0.0)
        report.warnings.push_back("fitted a peak rather than a dip; linewidth split "
                                  "skipped");

    const double fwhm = 2.0 * hwhm;
    const double sigma_fwhm = 2.0 * sigma_from(lm.covariance, 1);
    report.derived.push_back({"fwhm_hz", fwhm, sigma_fwhm});
    if (hwhm > 0.0 && center > 0.0) {
        const double q = center / fwhm;
        const double rel_c = sigma_from(lm.covariance, 0) / center;
        const double rel_w = fwhm > 0.0 ? sigma_fwhm / fwhm : 0.0;
        report.derived.push_back(
            {"loaded_q", q, q * std::sqrt(rel_c * rel_c + rel_w * rel_w)});
    }

    // Linewidth split under the declared assumption.  The dip magnitude alone
    // cannot separate coupling from intrinsic loss.
    const double rel_h = hwhm > 0.0 ? sigma_from(lm.covariance, 1) / hwhm : 0.0;
    const auto push_split = [&](double gamma_hz) {
        report.derived.push_back({"gamma_hz", gamma_hz, gamma_hz * rel_h});
        report.derived.push_back(
            {"gamma_prime_hz", hwhm - gamma_hz, (hwhm - gamma_hz) * rel_h});
    };
    const bool splittable = depth > 0.0 && base > 0.0;
    switch (split.rule) {
        case LinewidthSplit::Rule::TotalOnly:
            report.assumptions.push_back(
                "linewidth split: not resolvable from magnitude alone");
            break;
        case LinewidthSplit::Rule::CriticallyCoupled: {
            report.assumptions.push_back("linewidth split: critically coupled port");
            push_split(0.5 * hwhm);
            if (splittable)
                report.derived.push_back({"mode_matching", depth / base, 0.0});
            break;
        }
        case LinewidthSplit::Rule::KnownModeMatching:
        case LinewidthSplit::Rule::DipContrast: {
            const double matching =
                split.rule == LinewidthSplit::Rule::KnownModeMatching
                    ? split.mode_matching
                    : 1.0;
            if (split.rule == LinewidthSplit::Rule::KnownModeMatching)
                report.assumptions.push_back("linewidth split: declared mode matching");
            else
                report.assumptions.push_back(
                    "linewidth split: dip contrast with unit mode matching");
            report.assumptions.push_back(
                split.side == CouplingSide::Undercoupled ? "coupling side: undercoupled"
                                                         : "coupling side: overcoupled");
            if (!splittable || !(matching > 0.0)) {
                report.warnings.push_back("linewidth split skipped: no usable contrast");
                break;
            }
            double contrast = depth / (base * matching);
            if (contrast > 1.0) {
                report.warnings.push_back(
                    "dip contrast exceeds the declared mode matching; "
                    "treating the port as critically coupled");
                contrast = 1.0;
            }
            const double root = std::sqrt(1.0 - contrast);
            const double gamma_hz = split.side == CouplingSide::Undercoupled
                                        ? 0.5 * hwhm * (1.0 - root)
                                        : 0.5 * hwhm * (1.0 + root);
            push_split(gamma_hz);
            break;
        }
    }
    return report;
}

FitReport fit_avoided_crossing(const SpectrumTrace& trace) {
    trace.validate();
    if (trace.kind != TraceKind::Crossing)
        throw DomainError("avoided-crossing fit needs a crossing trace");
    const std::size_t n = trace.x.size();
    if (n < 8) throw DomainError("crossing fit needs at least eight samples");
    const bool two_branch = trace.has_second_branch();

    const double t_anchor =
        std::accumulate(trace.x.begin(), trace.x.end(), 0.0) / static_cast<double>(n);
    double nu_anchor = std::accumulate(trace.y.begin(), trace.y.end(), 0.0);
    if (two_branch)
        nu_anchor += std::accumulate(trace.y2.begin(), trace.y2.end(), 0.0);
    nu_anchor /= static_cast<double>(two_branch ? 2 * n : n);

    std::vector<double> upper(n), lower(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (two_branch) {
            upper[i] = std::max(trace.y[i], trace.y2[i]);
            lower[i] = std::min(trace.y[i], trace.y2[i]);
        } else {
            upper[i] = trace.y[i];
            lower[i] = trace.y[i];
        }
    }

    // Seed the bare lines from the end segments of the upper branch: far from
    // the crossing, the upper branch rides one bare mode on each side.
    const std::size_t seg = std::max<std::size_t>(3, (n * 3) / 20);
    const LineSeed left = fit_line(trace.x, upper, 0, seg, t_anchor);
    const LineSeed right = fit_line(trace.x, upper, n - seg, n, t_anchor);

    double span_y = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        span_y = std::max(span_y, std::abs(upper[i] - nu_anchor));
        span_y = std::max(span_y, std::abs(lower[i] - nu_anchor));
    }
    if (!(span_y > 0.0)) span_y = 1.0;
    const double span_t =
        std::max(trace.x.back() - trace.x.front(), 1e-12);

    double kappa0 = 0.0;
    if (two_branch) {
        double min_split = upper[0] - lower[0];
        for (std::size_t i = 1; i < n; ++i)
            min_split = std::min(min_split, upper[i] - lower[i]);
        kappa0 = std::max(0.5 * min_split, 1e-6 * span_y);
    } else {
        kappa0 = span_y / 20.0;
        const double dslope = left.slope - right.slope;
        if (std::abs(dslope) > 1e-12 * std::max(std::abs(left.slope), std::abs(right.slope))) {
            const double t_cross =
                t_anchor + (right.value_at_anchor - left.value_at_anchor) / dslope;
            if (t_cross >= trace.x.front() && t_cross <= trace.x.back()) {
                const auto it = std::min_element(
                    trace.x.begin(), trace.x.end(), [&](double a, double b) {
                        return std::abs(a - t_cross) < std::abs(b - t_cross);
                    });
                const auto idx = static_cast<std::size_t>(it - trace.x.begin());
                const double line_nu = left.value_at_anchor + left.slope * (t_cross - t_anchor);
                kappa0 = std::max(std::abs(trace.y[idx] - nu_anchor - line_nu),
                                  1e-6 * span_y);
            }
        }
    }

    // p = [v_a, s_a, v_b, s_b, kappa]; values relative to (t_anchor, nu_anchor).
    Eigen::VectorXd p0(5);
    p0 << left.value_at_anchor - nu_anchor, left.slope,
        right.value_at_anchor - nu_anchor, right.slope, kappa0;

    const int n_res = static_cast<int>(two_branch ? 2 * n : n);
    const auto residual = [&](const Eigen::VectorXd& p, Eigen::VectorXd& r) {
        const double va = p[0], sa = p[1], vb = p[2], sb = p[3], kap = p[4];
        for (std::size_t i = 0; i < n; ++i) {
            const double dt = trace.x[i] - t_anchor;
            const double na = va + sa * dt;
            const double nb = vb + sb * dt;
            const double mean = 0.5 * (na + nb);
            const double delta = na - nb;
            const double shift = std::sqrt(kap * kap + 0.25 * delta * delta);
            const double up = mean + shift;
            const double lo = mean - shift;
            if (two_branch) {
                r[static_cast<Eigen::Index>(2 * i)] = up - (upper[i] - nu_anchor);
                r[static_cast<Eigen::Index>(2 * i + 1)] = lo - (lower[i] - nu_anchor);
            } else {
                const double obs = trace.y[i] - nu_anchor;
                r[static_cast<Eigen::Index>(i)] =
                    std::abs(obs - up) <= std::abs(obs - lo) ? obs - up : obs - lo;
            }
        }
    };

    LmOptions options;
    options.param_scales.resize(5);
    options.param_scales << 0.5 * span_y + kappa0, span_y / span_t,
        0.5 * span_y + kappa0, span_y / span_t, kappa0;
    const LmResult lm =
        levenberg_marquardt(residual, n_res, p0, nullptr, options);

    const double va = lm.params[0], sa = lm.params[1];
    const double vb = lm.params[2], sb = lm.params[3];
    const double kappa = std::abs(lm.params[4]);

    FitReport report;
    report.kind = TraceKind::Crossing;
    report.residual_rms = lm.residual_rms;
    report.iterations = lm.iterations;
    report.assumptions.push_back("bare-mode anchors quoted at the trace mean "
                                 "temperature");
    report.params = {
        {"nu_a_at_anchor_hz", nu_anchor + va, sigma_from(lm.covariance, 0)},
        {"slope_a_hz_per_k", sa, sigma_from(lm.covariance, 1)},
        {"nu_b_at_anchor_hz", nu_anchor + vb, sigma_from(lm.covariance, 2)},
        {"slope_b_hz_per_k", sb, sigma_from(lm.covariance, 3)},
        {"anchor_temperature_c", t_anchor, 0.0},
    };

    const double sigma_kappa = sigma_from(lm.covariance, 4);
    report.derived.push_back({"kappa_hz", kappa, sigma_kappa});
    report.derived.push_back({"min_splitting_hz", 2.0 * kappa, 2.0 * sigma_kappa});

    const double dslope = sa - sb;
    if (std::abs(dslope) > 1e-12 * std::max(std::abs(sa), std::abs(sb))) {
        report.derived.push_back(
            {"crossing_temperature_c", t_anchor + (vb - va) / dslope, 0.0});
    } else {
        report.warnings.push_back("bare slopes are degenerate; crossing temperature "
                                  "is undefined");
    }
    const double steep = std::max(std::abs(sa), std::abs(sb));
    const double shallow = std::min(std::abs(sa), std::abs(sb));
    if (shallow > 0.0)
        report.derived.push_back({"slope_ratio", steep / shallow, 0.0});
    else
        report.warnings.push_back("one bare slope is zero; slope ratio is undefined");

    if (2.0 * kappa < 3.0 * lm.residual_rms)
        report.warnings.push_back("unresolved crossing: fitted splitting is below "
                                  "three times the residual noise; kappa is an "
                                  "upper bound");
    return report;
}

} // namespace eoconv
