#pragma once

#include "wdn/fixed_point.hpp"

#include <Eigen/Dense>

namespace wdn {

/// Stacked unknowns of the water-flow equations: L flows (cfs), N heads (ft).
struct FullState {
    Eigen::VectorXd q;
    Eigen::VectorXd h;
};

/// r = [I q - s ; hbar(q) - I'(h - h0 1)], cfs rows then feet rows.
Eigen::VectorXd full_residual(const FullState& state, const HydraulicSystem& system);

/// Analytic Jacobian of full_residual, ordered (q, h). Derivative entries of
/// the head loss are evaluated at max(|q|, kink_guard_cfs).
Eigen::MatrixXd full_residual_jacobian(const FullState& state, const HydraulicSystem& system,
                                       double kink_guard_cfs);

struct NewtonOptions {
    double tolerance = 1e-8;  // on ||r||_inf, mixed units
    int max_iterations = 100;
    int max_halvings = 30;
    double kink_guard_cfs = 1e-10;
};

struct NewtonResult {
    FullState state;
    int iterations = 0;
    bool converged = false;
    double residual_norm = 0.0;
};

/// Uniform start flow with every head at the reservoir head.
FullState uniform_start(const HydraulicSystem& system, double flow_gpm = 600.0);

/// Damped Newton-Raphson on full_residual with step halving on the residual
/// infinity norm. Throws NumericalError if the Newton matrix is singular;
/// running out of iterations or halvings is reported, not thrown.
NewtonResult newton_solve(const HydraulicSystem& system, const FullState& start,
                          const NewtonOptions& options = {});

}  // namespace wdn
