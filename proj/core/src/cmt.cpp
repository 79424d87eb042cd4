#include "eoconv/cmt.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>

#include "eoconv/constants.hpp"

namespace eoconv {

namespace {

using Cplx = std::complex<double>;

// Solver-side denominators use each mode's own rates; identical to
// gamma_p/gamma_sb/gamma_mw_total whenever the optical rates are equal.
Cplx solver_gamma(const OpticalMode& mode, double drive) {
    return {mode.total_rate(), -(drive - mode.omega0)};
}

struct DriveAmplitudes {
    Cplx d_pump; // sqrt(2*gamma_ext) * sqrt(Lambda * P / (hbar*omega))
    Cplx d_mw;
};

DriveAmplitudes drive_amplitudes(const ConverterSystem& sys) {
    const double pump_flux =
        sys.pump_mode_matching * sys.pump_power / (kHbar * sys.pump_drive);
    const double mw_flux = sys.mw_power / (kHbar * sys.mw_drive);
    return {Cplx{std::sqrt(2.0 * sys.pump.gamma * pump_flux), 0.0},
            Cplx{std::sqrt(2.0 * sys.mw.gamma * mw_flux), 0.0}};
}

// Residual of the four coupled steady-state equations.
//   F1 = Gamma_p a + i g (b- c + b+ conj(c)) - d_p
//   F2 = Gamma_+ b+ + i g a c
//   F3 = Gamma_- b- + i g a conj(c)
//   F4 = Gamma_O c + i g (a conj(b-) + conj(a) b+) - d_mw   (full back-action)
//   F4 = Gamma_O c - d_mw                                   (signal undepleted)
struct Model {
    Cplx gp, gpl, gmi, gom; // denominators
    Cplx d_p, d_mw;
    double g = 0.0;
    bool mw_back_action = false;

    void residual(const Cplx x[4], Cplx f[4]) const {
        const Cplx a = x[0], bp = x[1], bm = x[2], c = x[3];
        const Cplx ig{0.0, g};
        f[0] = gp * a + ig * (bm * c + bp * std::conj(c)) - d_p;
        f[1] = gpl * bp + ig * (a * c);
        f[2] = gmi * bm + ig * (a * std::conj(c));
        f[3] = mw_back_action
                   ? gom * c + ig * (a * std::conj(bm) + std::conj(a) * bp) - d_mw
                   : gom * c - d_mw;
    }

    // Real 8x8 Jacobian assembled from Wirtinger pairs (dF/dz, dF/dconj(z)).
    void jacobian(const Cplx x[4], Eigen::Matrix<double, 8, 8>& jac) const {
        const Cplx a = x[0], bp = x[1], bm = x[2], c = x[3];
        const Cplx ig{0.0, g};

        Cplx dz[4][4] = {};  // dz[i][j]  = dF_i / dz_j
        Cplx dzc[4][4] = {}; // dzc[i][j] = dF_i / dconj(z_j)

        // F1 = gp*a + ig*(bm*c + bp*conj(c)) - d_p
        dz[0][0] = gp;
        dz[0][1] = ig * std::conj(c);
        dz[0][2] = ig * c;
        dz[0][3] = ig * bm;
        dzc[0][3] = ig * bp;
        // F2 = gpl*bp + ig*a*c
        dz[1][0] = ig * c;
        dz[1][1] = gpl;
        dz[1][3] = ig * a;
        // F3 = gmi*bm + ig*a*conj(c)
        dz[2][0] = ig * std::conj(c);
        dz[2][2] = gmi;
        dzc[2][3] = ig * a;
        // F4 = gom*c (+ ig*(a*conj(bm) + conj(a)*bp) - d_mw when coupled)
        dz[3][3] = gom;
        if (mw_back_action) {
            dz[3][0] = ig * std::conj(bm);
            dzc[3][0] = ig * bp;
            dz[3][1] = ig * std::conj(a);
            dzc[3][2] = ig * a;
        }

        for (int i = 0; i < 4; ++i) {
            for (int j = 0; j < 4; ++j) {
                const Cplx s = dz[i][j] + dzc[i][j];
                const Cplx d = dz[i][j] - dzc[i][j];
                jac(2 * i, 2 * j) = s.real();
                jac(2 * i, 2 * j + 1) = -d.imag();
                jac(2 * i + 1, 2 * j) = s.imag();
                jac(2 * i + 1, 2 * j + 1) = d.real();
            }
        }
    }
};

double norm2(const Cplx f[4]) {
    double s = 0.0;
    for (int i = 0; i < 4; ++i) s += std::norm(f[i]);
    return std::sqrt(s);
}

} // namespace

ConversionResult sideband_powers_undepleted(const ConverterSystem& sys) {
    sys.validate();

    const Cplx gp = gamma_p(sys);
    const Cplx gpl = gamma_sb(sys, Sideband::Plus);
    const Cplx gmi = gamma_sb(sys, Sideband::Minus);
    const Cplx gom = gamma_mw_total(sys);

    const double num = 8.0 * sys.g * sys.g * sys.pump.gamma * sys.pump.gamma *
                       sys.mw.gamma * sys.pump_mode_matching;
    const double common = num / (kHbar * sys.mw_drive * std::norm(gp) * std::norm(gom));

    ConversionResult res;
    res.zeta_plus = common / std::norm(gpl);
    res.zeta_minus = common / std::norm(gmi);
    res.p_plus = res.zeta_plus * sys.pump_power * sys.mw_power;
    res.p_minus = res.zeta_minus * sys.pump_power * sys.mw_power;
    res.eta_plus = (sys.mw_drive / sys.sb_plus.omega0) * res.zeta_plus * sys.pump_power;
    res.eta_minus =
        (sys.mw_drive / sys.sb_minus.omega0) * res.zeta_minus * sys.pump_power;
    res.perturbative_regime_exceeded = res.eta_plus > 1.0 || res.eta_minus > 1.0;
    return res;
}

SteadyState solve_steady_state(const ConverterSystem& sys, const SolveOptions& opts) {
    sys.validate();
    if (opts.tolerance <= 0.0) throw DomainError("solver tolerance must be positive");
    if (opts.max_iterations < 1) throw DomainError("iteration cap must be >= 1");

    Model model;
    model.gp = solver_gamma(sys.pump, sys.pump_drive);
    model.gpl = solver_gamma(sys.sb_plus, sys.pump_drive + sys.mw_drive);
    model.gmi = solver_gamma(sys.sb_minus, sys.pump_drive - sys.mw_drive);
    model.gom = gamma_mw_total(sys);
    const DriveAmplitudes d = drive_amplitudes(sys);
    model.d_p = d.d_pump;
    model.d_mw = d.d_mw;
    model.g = sys.g;
    model.mw_back_action = opts.microwave_back_action;

    const Cplx a_lin = model.d_p / model.gp;
    const Cplx c_lin = model.d_mw / model.gom;
    const Cplx ig{0.0, sys.g};

    SteadyState st;
    if (!opts.deplete) {
        st.a = a_lin;
        st.c = c_lin;
        st.b_plus = -ig * a_lin * c_lin / model.gpl;
        st.b_minus = -ig * a_lin * std::conj(c_lin) / model.gmi;
        st.converged = true;
        st.iterations = 0;
        st.residual = 0.0;
        return st;
    }

    Cplx x[4] = {a_lin, -ig * a_lin * c_lin / model.gpl,
                 -ig * a_lin * std::conj(c_lin) / model.gmi, c_lin};
    const double drive_scale = std::max(std::hypot(std::abs(model.d_p), std::abs(model.d_mw)),
                                        std::numeric_limits<double>::min());

    Cplx f[4];
    Eigen::Matrix<double, 8, 8> jac;
    Eigen::Matrix<double, 8, 1> rhs, step;

    int iter = 0;
    double rel = 0.0;
    for (iter = 1; iter <= opts.max_iterations; ++iter) {
        model.residual(x, f);
        const double fn = norm2(f);
        rel = fn / drive_scale;
        if (rel <= opts.tolerance) {
            st.converged = true;
            break;
        }

        model.jacobian(x, jac);
        for (int i = 0; i < 4; ++i) {
            rhs(2 * i) = -f[i].real();
            rhs(2 * i + 1) = -f[i].imag();
        }
        step = jac.colPivHouseholderQr().solve(rhs);

        // Backtracking line search on the residual norm.
        double alpha = 1.0;
        bool accepted = false;
        Cplx trial[4], ft[4];
        for (int back = 0; back < 40; ++back) {
            for (int i = 0; i < 4; ++i)
                trial[i] = x[i] + alpha * Cplx{step(2 * i), step(2 * i + 1)};
            model.residual(trial, ft);
            if (norm2(ft) < fn) {
                accepted = true;
                break;
            }
            alpha *= 0.5;
        }
        if (!accepted)
            throw NoConvergence("steady-state iteration stalled", iter, rel);
        for (int i = 0; i < 4; ++i) x[i] = trial[i];
    }
    if (!st.converged)
        throw NoConvergence("steady-state solver hit the iteration cap",
                            opts.max_iterations, rel);

    st.a = x[0];
    st.b_plus = x[1];
    st.b_minus = x[2];
    st.c = x[3];
    st.iterations = iter;
    st.residual = rel;
    return st;
}

ConversionResult output_powers(const ConverterSystem& sys, const SteadyState& state) {
    ConversionResult res;
    res.p_plus =
        2.0 * sys.sb_plus.gamma * kHbar * sys.sb_plus.omega0 * std::norm(state.b_plus);
    res.p_minus = 2.0 * sys.sb_minus.gamma * kHbar * sys.sb_minus.omega0 *
                  std::norm(state.b_minus);
    if (sys.mw_power > 0.0) {
        res.eta_plus =
            measured_efficiency(res.p_plus, sys.mw_power, sys.mw_drive, sys.sb_plus.omega0);
        res.eta_minus = measured_efficiency(res.p_minus, sys.mw_power, sys.mw_drive,
                                            sys.sb_minus.omega0);
    }
    if (sys.pump_power > 0.0 && sys.mw_power > 0.0) {
        res.zeta_plus = res.p_plus / (sys.pump_power * sys.mw_power);
        res.zeta_minus = res.p_minus / (sys.pump_power * sys.mw_power);
    }
    res.perturbative_regime_exceeded = res.eta_plus > 1.0 || res.eta_minus > 1.0;
    return res;
}

FluxAudit flux_audit(const ConverterSystem& sys, const SteadyState& state) {
    const DriveAmplitudes d = drive_amplitudes(sys);

    FluxAudit audit;
    audit.pump_absorbed = 2.0 * std::real(std::conj(state.a) * d.d_pump);
    audit.pump_dissipated = 2.0 * sys.pump.total_rate() * std::norm(state.a);
    audit.pump_converted = audit.pump_absorbed - audit.pump_dissipated;
    audit.sb_plus_flux = 2.0 * sys.sb_plus.total_rate() * std::norm(state.b_plus);
    audit.sb_minus_flux = 2.0 * sys.sb_minus.total_rate() * std::norm(state.b_minus);
    audit.mw_absorbed = 2.0 * std::real(std::conj(state.c) * d.d_mw);
    audit.mw_dissipated = 2.0 * sys.mw.total_rate() * std::norm(state.c);
    audit.mw_converted = audit.mw_absorbed - audit.mw_dissipated;
    return audit;
}

double suppression(double delta_minus, double gamma, double gamma_prime) {
    const double total = gamma + gamma_prime;
    if (!(total > 0.0))
        throw ZeroLinewidth("suppression requires a positive total linewidth");
    const double x = delta_minus / total;
    return x * x + 1.0;
}

double detuning_scheme_pump_penalty(double suppression_ratio) {
    if (!(suppression_ratio >= 1.0))
        throw DomainError("suppression ratio must be >= 1");
    return (suppression_ratio - 1.0) / 4.0 + 1.0;
}

double intracavity_photon_number(const OpticalMode& mode, double p_in, double detuning) {
    if (p_in < 0.0) throw DomainError("input power must be >= 0");
    const double total = mode.total_rate();
    if (!(total > 0.0))
        throw NonPositiveLinewidth("intracavity photon number needs a positive linewidth");
    if (!(mode.omega0 > 0.0)) throw DomainError("mode frequency must be positive");
    return (2.0 * mode.gamma * p_in / (kHbar * mode.omega0)) /
           (detuning * detuning + total * total);
}

double cooperativity(const ConverterSystem& sys) {
    sys.validate();
    const double n_pump = intracavity_photon_number(
        sys.pump, sys.pump_mode_matching * sys.pump_power, pump_detuning(sys));
    return sys.g * sys.g * n_pump /
           (std::abs(gamma_sb(sys, Sideband::Plus)) * std::abs(gamma_mw_total(sys)));
}

double measured_efficiency(double p_plus, double p_mw, double mw_drive,
                           double omega_plus) {
    if (!(p_mw > 0.0)) throw DomainError("microwave power must be positive");
    if (!(omega_plus > 0.0)) throw DomainError("sideband frequency must be positive");
    if (p_plus < 0.0) throw DomainError("sideband power must be >= 0");
    return (mw_drive / omega_plus) * (p_plus / p_mw);
}

double infer_g_from_slope(double slope_per_watt, const ConverterSystem& sys) {
    sys.validate();
    if (slope_per_watt < 0.0) throw DomainError("slope must be >= 0");
    if (!(sys.pump_power > 0.0))
        throw DomainError("slope inversion requires a positive pump power");
    if (!(sys.pump.gamma > 0.0) || !(sys.mw.gamma > 0.0))
        throw DomainError("slope inversion requires external coupling on pump and microwave");
    if (!(sys.pump_mode_matching > 0.0))
        throw DomainError("slope inversion requires non-zero pump mode matching");

    const double denom_rates = 8.0 * sys.pump.gamma * sys.pump.gamma * sys.mw.gamma *
                               sys.pump_mode_matching * sys.pump_power;
    const double gammas = std::norm(gamma_p(sys)) *
                          std::norm(gamma_sb(sys, Sideband::Plus)) *
                          std::norm(gamma_mw_total(sys));
    return std::sqrt(slope_per_watt * kHbar * sys.mw_drive * gammas / denom_rates);
}

} // namespace eoconv
