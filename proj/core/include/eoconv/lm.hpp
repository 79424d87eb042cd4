#pragma once

#include <functional>

#include <Eigen/Dense>

#include "eoconv/errors.hpp"

// Damped least-squares (Levenberg-Marquardt) minimiser used by the trace
// fitters.  Small and self-contained: diagonal (Marquardt) scaling, optional
// analytic Jacobian, central-difference fallback.

namespace eoconv {

using ResidualFn = std::function<void(const Eigen::VectorXd& params, Eigen::VectorXd& residuals)>;
using JacobianFn = std::function<void(const Eigen::VectorXd& params, Eigen::MatrixXd& jacobian)>;

struct LmOptions {
    int max_iterations = 500;
    double step_tolerance = 1e-10;  // relative parameter step below which we stop
    double lambda0 = 1e-3;          // initial damping
    Eigen::VectorXd param_scales;   // finite-difference scales; empty = from |p0|
};

struct LmResult {
    Eigen::VectorXd params;
    Eigen::MatrixXd covariance;  // sigma^2 * (J^T J)^-1 at the solution
    double sse = 0.0;            // sum of squared residuals
    double residual_rms = 0.0;
    int iterations = 0;
    bool converged = false;
};

// Minimise |r(p)|^2 from p0.  Throws NoConvergence if the iteration cap is
// reached without the step shrinking below tolerance, IllConditioned if the
// normal equations are not solvable even under heavy damping.
[[nodiscard]] LmResult levenberg_marquardt(const ResidualFn& residual, int n_residuals,
                                           Eigen::VectorXd p0,
                                           const JacobianFn& jacobian = nullptr,
                                           const LmOptions& options = {});

} // namespace eoconv
