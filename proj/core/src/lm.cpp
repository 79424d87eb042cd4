#include "eoconv/lm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace eoconv {

namespace {

void numeric_jacobian(const ResidualFn& residual, const Eigen::VectorXd& p,
                      const Eigen::VectorXd& scales, Eigen::MatrixXd& jac,
                      Eigen::VectorXd& r_hi, Eigen::VectorXd& r_lo) {
    const auto n = p.size();
    Eigen::VectorXd probe = p;
    for (Eigen::Index k = 0; k < n; ++k) {
        const double h = 1e-7 * scales[k];
        probe[k] = p[k] + h;
        residual(probe, r_hi);
        probe[k] = p[k] - h;
        residual(probe, r_lo);
        probe[k] = p[k];
        jac.col(k) = (r_hi - r_lo) / (2.0 * h);
    }
}

} // namespace

LmResult levenberg_marquardt(const ResidualFn& residual, int n_residuals,
                             Eigen::VectorXd p0, const JacobianFn& jacobian,
                             const LmOptions& options) {
    const auto n_params = p0.size();
    if (n_params == 0) throw DomainError("fit needs at least one parameter");
    if (n_residuals < n_params)
        throw DomainError("fit needs at least as many residuals as parameters");

    Eigen::VectorXd scales;
    if (options.param_scales.size() == n_params) {
        scales = options.param_scales.cwiseAbs();
    } else {
        scales = p0.cwiseAbs();
    }
    for (Eigen::Index k = 0; k < n_params; ++k)
        if (!(scales[k] > 0.0)) scales[k] = 1.0;

    Eigen::VectorXd r(n_residuals);
    Eigen::VectorXd r_trial(n_residuals);
    Eigen::VectorXd r_hi(n_residuals);
    Eigen::VectorXd r_lo(n_residuals);
    Eigen::MatrixXd jac(n_residuals, n_params);

    residual(p0, r);
    double sse = r.squaredNorm();
    if (!std::isfinite(sse)) throw DomainError("residual is not finite at the seed");

    double lambda = options.lambda0;
    LmResult result;
    result.params = p0;
    bool converged = false;
    int iter = 0;

    for (iter = 1; iter <= options.max_iterations; ++iter) {
        if (jacobian) {
            jacobian(result.params, jac);
        } else {
            numeric_jacobian(residual, result.params, scales, jac, r_hi, r_lo);
        }

        const Eigen::MatrixXd jtj = jac.transpose() * jac;
        const Eigen::VectorXd jtr = jac.transpose() * r;
        const double diag_max = jtj.diagonal().maxCoeff();
        if (!(diag_max > 0.0))
            throw IllConditioned("all residuals are insensitive to the parameters");

        bool stepped = false;
        for (int attempt = 0; attempt < 60; ++attempt) {
            Eigen::MatrixXd damped = jtj;
            for (Eigen::Index k = 0; k < n_params; ++k) {
                const double d = std::max(jtj(k, k), 1e-12 * diag_max);
                damped(k, k) += lambda * d;
            }
            const Eigen::VectorXd step = damped.ldlt().solve(-jtr);
            if (!step.allFinite()) {
                lambda *= 10.0;
                continue;
            }
            const Eigen::VectorXd p_trial = result.params + step;
            residual(p_trial, r_trial);
            const double sse_trial = r_trial.squaredNorm();
            if (std::isfinite(sse_trial) && sse_trial <= sse) {
                // Relative step before accepting, so convergence is judged on
                // the move that actually improved the fit.
                double rel_step = 0.0;
                for (Eigen::Index k = 0; k < n_params; ++k) {
                    const double denom = std::abs(result.params[k]) + scales[k];
                    rel_step = std::max(rel_step, std::abs(step[k]) / denom);
                }
                result.params = p_trial;
                r = r_trial;
                sse = sse_trial;
                lambda = std::max(lambda / 3.0, 1e-14);
                stepped = true;
                if (rel_step < options.step_tolerance) converged = true;
                break;
            }
            lambda *= 10.0;
            if (lambda > 1e16)
                break;
        }

        if (!stepped) {
            // No downhill step exists even under maximal damping: the current
            // point is (numerically) a minimum.
            converged = true;
        }
        if (converged) break;
    }

    if (!converged)
        throw NoConvergence("fit did not converge", iter - 1, std::sqrt(sse / n_residuals));

    // Covariance from the undamped normal equations at the solution.
    if (jacobian) {
        jacobian(result.params, jac);
    } else {
        numeric_jacobian(residual, result.params, scales, jac, r_hi, r_lo);
    }
    const Eigen::MatrixXd jtj = jac.transpose() * jac;
    const int dof = std::max(1, n_residuals - static_cast<int>(n_params));
    const double sigma2 = sse / dof;
    // Equilibrate to unit diagonal before inverting: parameter magnitudes can
    // differ by many decades (frequencies vs dip depths), which otherwise
    // makes the LU rank test reject a perfectly regular matrix.
    Eigen::VectorXd d(n_params);
    for (Eigen::Index k = 0; k < static_cast<Eigen::Index>(n_params); ++k)
        d[k] = jtj(k, k) > 0.0 ? std::sqrt(jtj(k, k)) : 1.0;
    const Eigen::MatrixXd jtj_scaled =
        jtj.array() / (d * d.transpose()).array();
    Eigen::FullPivLU<Eigen::MatrixXd> lu(jtj_scaled);
    if (lu.isInvertible()) {
        const Eigen::MatrixXd inv = lu.inverse();
        result.covariance =
            (inv.array() / (d * d.transpose()).array()).matrix() * sigma2;
    } else {
        result.covariance = Eigen::MatrixXd::Constant(
            n_params, n_params, std::numeric_limits<double>::quiet_NaN());
    }
    result.sse = sse;
    result.residual_rms = std::sqrt(sse / n_residuals);
    result.iterations = std::min(iter, options.max_iterations);
    result.converged = true;
    return result;
}

} // namespace eoconv
