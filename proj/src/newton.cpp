#include "wdn/newton.hpp"

#include "wdn/units.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace wdn {

namespace {

double inf_norm(const Eigen::VectorXd& v) { return v.size() ? v.lpNorm<Eigen::Infinity>() : 0.0; }

void check_dimensions(const FullState& state, const HydraulicSystem& system) {
    if (state.q.size() != system.pipe_count() || state.h.size() != system.node_count()) {
        throw std::invalid_argument("state dimensions do not match the network");
    }
}

}  // namespace

Eigen::VectorXd full_residual(const FullState& state, const HydraulicSystem& system) {
    check_dimensions(state, system);
    const auto& inc = system.reduced_incidence();
    const int n = system.node_count();
    const int l = system.pipe_count();

    Eigen::VectorXd r(n + l);
    r.head(n) = inc * state.q - system.injections();
    const Eigen::VectorXd offset = (state.h.array() - system.reservoir_head()).matrix();
    r.tail(l) = head_loss(state.q, system.resistance()) - inc.transpose() * offset;
    return r;
}

Eigen::MatrixXd full_residual_jacobian(const FullState& state, const HydraulicSystem& system,
                                       double kink_guard_cfs) {
    check_dimensions(state, system);
    const auto& inc = system.reduced_incidence();
    const int n = system.node_count();
    const int l = system.pipe_count();

    const Eigen::VectorXd guarded = state.q.array().abs().max(kink_guard_cfs).matrix();
    Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(n + l, l + n);
    jac.topLeftCorner(n, l) = inc;
    jac.bottomLeftCorner(l, l).diagonal() = head_loss_derivative(guarded, system.resistance());
    jac.bottomRightCorner(l, n) = -inc.transpose();
    return jac;
}

FullState uniform_start(const HydraulicSystem& system, double flow_gpm) {
    return FullState{Eigen::VectorXd::Constant(system.pipe_count(), gpm_to_cfs(flow_gpm)),
                     Eigen::VectorXd::Constant(system.node_count(), system.reservoir_head())};
}

NewtonResult newton_solve(const HydraulicSystem& system, const FullState& start,
                          const NewtonOptions& options) {
    check_dimensions(start, system);
    const int n = system.node_count();
    const int l = system.pipe_count();

    NewtonResult result;
    if ((system.injections().array() == 0.0).all()) {
        result.state = FullState{Eigen::VectorXd::Zero(l),
                                 Eigen::VectorXd::Constant(n, system.reservoir_head())};
        result.converged = true;
        return result;
    }

    FullState x = start;
    Eigen::VectorXd r = full_residual(x, system);
    double norm = inf_norm(r);

    while (norm > options.tolerance && result.iterations < options.max_iterations) {
        Eigen::FullPivLU<Eigen::MatrixXd> lu(full_residual_jacobian(x, system, options.kink_guard_cfs));
        if (!lu.isInvertible()) {
            throw NumericalError("singular Newton system at iteration " +
                                 std::to_string(result.iterations + 1));
        }
        const Eigen::VectorXd delta = lu.solve(-r);

        bool accepted = false;
        double t = 1.0;
        for (int halving = 0; halving <= options.max_halvings; ++halving, t *= 0.5) {
            FullState trial{x.q + t * delta.head(l), x.h + t * delta.tail(n)};
            Eigen::VectorXd trial_r = full_residual(trial, system);
            const double trial_norm = inf_norm(trial_r);
            if (trial_norm < norm) {
                x = std::move(trial);
                r = std::move(trial_r);
                norm = trial_norm;
                accepted = true;
                break;
            }
        }
        ++result.iterations;
        if (!accepted) {
            break;
        }
    }

    result.state = std::move(x);
    result.residual_norm = norm;
    result.converged = norm <= options.tolerance;
    return result;
}

}  // namespace wdn
