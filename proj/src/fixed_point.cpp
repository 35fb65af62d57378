#include "wdn/fixed_point.hpp"

#include "wdn/units.hpp"

#include <cmath>
#include <string>
#include <utility>

namespace wdn {

HydraulicSystem::HydraulicSystem(Network network)
    : network_(std::move(network)),
      incidence_(build_incidence(network_)),
      resistance_(resistance_vector(network_)),
      injections_(network_.injections_cfs()) {}

HydraulicSystem HydraulicSystem::with_injections(Eigen::VectorXd injections) const {
    if (injections.size() != injections_.size()) {
        throw std::invalid_argument("injection vector has wrong length");
    }
    HydraulicSystem copy = *this;
    copy.injections_ = std::move(injections);
    return copy;
}

Eigen::VectorXd conductance(const Eigen::VectorXd& q, const Eigen::VectorXd& resistance,
                            double floor_cfs) {
    return q.array().abs().max(floor_cfs).pow(-kFlowExponent) / resistance.array();
}

Eigen::MatrixXd laplacian(const Eigen::VectorXd& weights, const Eigen::MatrixXd& reduced_incidence) {
    return reduced_incidence * weights.asDiagonal() * reduced_incidence.transpose();
}

Eigen::VectorXd solve_laplacian(const Eigen::MatrixXd& z, const Eigen::VectorXd& rhs) {
    Eigen::LLT<Eigen::MatrixXd> llt(z);
    if (llt.info() != Eigen::Success) {
        throw NumericalError("network numerically disconnected: weighted Laplacian is not positive definite");
    }
    return llt.solve(rhs);
}

MapEvaluation evaluate_map(const Eigen::VectorXd& q, const HydraulicSystem& system, double floor_cfs) {
    const auto& inc = system.reduced_incidence();
    const Eigen::VectorXd g = conductance(q, system.resistance(), floor_cfs);

    MapEvaluation eval;
    eval.floored = static_cast<int>((q.array().abs() < floor_cfs).count());
    eval.head_offset = solve_laplacian(laplacian(g, inc), system.injections());
    eval.value = g.cwiseProduct(inc.transpose() * eval.head_offset);
    return eval;
}

Eigen::VectorXd apply_map(const Eigen::VectorXd& q, const HydraulicSystem& system, double floor_cfs) {
    return evaluate_map(q, system, floor_cfs).value;
}

Eigen::VectorXd recover_heads(const Eigen::VectorXd& q, const HydraulicSystem& system, double floor_cfs) {
    const Eigen::VectorXd g = conductance(q, system.resistance(), floor_cfs);
    Eigen::VectorXd h = solve_laplacian(laplacian(g, system.reduced_incidence()), system.injections());
    h.array() += system.reservoir_head();
    return h;
}

double reservoir_intake_gpm(const Eigen::VectorXd& q, const IncidenceDecomposition& incidence) {
    return cfs_to_gpm(incidence.reservoir_row.dot(q));
}

Residuals residuals(const Eigen::VectorXd& q, const Eigen::VectorXd& h, const HydraulicSystem& system) {
    const auto& inc = system.reduced_incidence();
    Residuals r;
    const Eigen::VectorXd continuity = inc * q - system.injections();
    const Eigen::VectorXd offset = (h.array() - system.reservoir_head()).matrix();
    const Eigen::VectorXd energy = head_loss(q, system.resistance()) - inc.transpose() * offset;
    r.continuity_gpm = continuity.size() ? cfs_to_gpm(continuity.lpNorm<Eigen::Infinity>()) : 0.0;
    r.energy_ft = energy.size() ? energy.lpNorm<Eigen::Infinity>() : 0.0;
    return r;
}

void require_valid(const SolverConfig& config) {
    if (!(config.tolerance_gpm > 0.0)) {
        throw std::invalid_argument("tolerance must be positive");
    }
    if (config.max_iterations < 1) {
        throw std::invalid_argument("max iterations must be at least 1");
    }
    if (!(config.flow_floor_cfs > 0.0)) {
        throw std::invalid_argument("flow floor must be positive");
    }
    require_valid(config.fluid);
}

Eigen::VectorXd initial_flows_cfs(const SolverConfig& config, int pipe_count) {
    if (const auto* uniform = std::get_if<double>(&config.initial_flow_gpm)) {
        return Eigen::VectorXd::Constant(pipe_count, gpm_to_cfs(*uniform));
    }
    const auto& per_pipe = std::get<std::vector<double>>(config.initial_flow_gpm);
    if (static_cast<int>(per_pipe.size()) != pipe_count) {
        throw std::invalid_argument("initial flow vector has " + std::to_string(per_pipe.size()) +
                                    " entries, network has " + std::to_string(pipe_count) + " pipes");
    }
    Eigen::VectorXd q(pipe_count);
    for (int l = 0; l < pipe_count; ++l) {
        q(l) = gpm_to_cfs(per_pipe[l]);
    }
    return q;
}

Eigen::VectorXd SolveResult::flows_gpm() const { return flows_cfs * kGpmPerCfs; }

SolveResult solve(const HydraulicSystem& system, const SolverConfig& config) {
    require_valid(config);
    SolveResult result;

    if ((system.injections().array() == 0.0).all()) {
        result.flows_cfs = Eigen::VectorXd::Zero(system.pipe_count());
        result.heads_ft = Eigen::VectorXd::Constant(system.node_count(), system.reservoir_head());
        result.converged = true;
        result.non_turbulent_pipes = non_turbulent_pipes(system.network(), result.flows_cfs, config.fluid);
        return result;
    }

    Eigen::VectorXd q = initial_flows_cfs(config, system.pipe_count());
    std::optional<double> previous_step;
    for (;;) {
        MapEvaluation eval = evaluate_map(q, system, config.flow_floor_cfs);
        ++result.map_evaluations;
        result.floor_activations += eval.floored;
        const double step = cfs_to_gpm((q - eval.value).lpNorm<Eigen::Infinity>());
        result.final_step_gpm = step;
        if (step <= config.tolerance_gpm) {
            result.converged = true;
            break;
        }
        if (result.iterations == config.max_iterations) {
            break;
        }
        TraceRecord record;
        record.iteration = ++result.iterations;
        record.step_inf_gpm = step;
        if (previous_step) {
            record.ratio = step / *previous_step;
        }
        result.trace.push_back(record);
        previous_step = step;
        q = std::move(eval.value);
    }

    result.flows_cfs = q;
    result.heads_ft = recover_heads(q, system, config.flow_floor_cfs);
    result.reservoir_intake_gpm = reservoir_intake_gpm(q, system.incidence());
    result.residuals = residuals(q, result.heads_ft, system);
    result.non_turbulent_pipes = non_turbulent_pipes(system.network(), q, config.fluid);
    return result;
}

}  // namespace wdn
