#pragma once

#include "wdn/hydraulics.hpp"
#include "wdn/network.hpp"

#include <Eigen/Dense>

#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace wdn {

inline constexpr double kDefaultFlowFloorCfs = 1e-8;

/// Raised when the weighted Laplacian cannot be factored.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Everything the map, the Jacobian and the Newton oracle need from a
/// validated network, computed once: incidence, resistances, injections.
class HydraulicSystem {
public:
    /// Throws NetworkError if the network is invalid.
    explicit HydraulicSystem(Network network);

    const Network& network() const { return network_; }
    const IncidenceDecomposition& incidence() const { return incidence_; }
    const Eigen::MatrixXd& reduced_incidence() const { return incidence_.reduced; }
    const Eigen::VectorXd& resistance() const { return resistance_; }
    const Eigen::VectorXd& injections() const { return injections_; }  // cfs
    double reservoir_head() const { return network_.reservoir().head_ft; }

    int node_count() const { return static_cast<int>(injections_.size()); }
    int pipe_count() const { return static_cast<int>(resistance_.size()); }

    /// Same network with the injection vector replaced (cfs).
    HydraulicSystem with_injections(Eigen::VectorXd injections) const;

private:
    Network network_;
    IncidenceDecomposition incidence_;
    Eigen::VectorXd resistance_;
    Eigen::VectorXd injections_;
};

/// G_l = (1/A_l) max(|q_l|, floor)^-0.852.
Eigen::VectorXd conductance(const Eigen::VectorXd& q, const Eigen::VectorXd& resistance,
                            double floor_cfs = kDefaultFlowFloorCfs);

/// Z = I diag(G) I' over the reduced incidence.
Eigen::MatrixXd laplacian(const Eigen::VectorXd& weights, const Eigen::MatrixXd& reduced_incidence);

/// Solves Z y = rhs with a Cholesky factorization. Throws NumericalError if
/// Z is not numerically positive definite.
Eigen::VectorXd solve_laplacian(const Eigen::MatrixXd& z, const Eigen::VectorXd& rhs);

/// Pieces of one evaluation of the map.
struct MapEvaluation {
    Eigen::VectorXd value;        // T(q), cfs
    Eigen::VectorXd head_offset;  // y = Z^-1 s = h - h0 1, feet
    int floored = 0;              // entries where the flow floor was active
};

MapEvaluation evaluate_map(const Eigen::VectorXd& q, const HydraulicSystem& system,
                           double floor_cfs = kDefaultFlowFloorCfs);

/// T(q) = G I' (I G I')^-1 s with G = conductance(q).
Eigen::VectorXd apply_map(const Eigen::VectorXd& q, const HydraulicSystem& system,
                          double floor_cfs = kDefaultFlowFloorCfs);

/// h = Z(q)^-1 s + h0 1.
Eigen::VectorXd recover_heads(const Eigen::VectorXd& q, const HydraulicSystem& system,
                              double floor_cfs = kDefaultFlowFloorCfs);

/// s0 = I_0 q, in GPM.
double reservoir_intake_gpm(const Eigen::VectorXd& q, const IncidenceDecomposition& incidence);

struct Residuals {
    double continuity_gpm = 0.0;  // ||I q - s||_inf
    double energy_ft = 0.0;       // ||hbar(q) - I'(h - h0 1)||_inf
};

Residuals residuals(const Eigen::VectorXd& q, const Eigen::VectorXd& h, const HydraulicSystem& system);

/// Scalar applies to every pipe; a vector gives one start value per pipe.
using InitialFlow = std::variant<double, std::vector<double>>;

struct SolverConfig {
    double tolerance_gpm = 0.001;
    int max_iterations = 1000;
    InitialFlow initial_flow_gpm = 600.0;
    double flow_floor_cfs = kDefaultFlowFloorCfs;
    FluidProperties fluid;
};

void require_valid(const SolverConfig& config);

Eigen::VectorXd initial_flows_cfs(const SolverConfig& config, int pipe_count);

struct TraceRecord {
    int iteration = 0;
    double step_inf_gpm = 0.0;    // ||q^k - q^{k-1}||_inf
    std::optional<double> ratio;  // step_k / step_{k-1}, absent for k = 1
};

struct SolveResult {
    Eigen::VectorXd flows_cfs;
    Eigen::VectorXd heads_ft;
    double reservoir_intake_gpm = 0.0;
    int iterations = 0;       // map updates q^{k+1} = T(q^k)
    int map_evaluations = 0;  // includes the final stopping check
    bool converged = false;
    double final_step_gpm = 0.0;  // ||q* - T(q*)||_inf at exit
    int floor_activations = 0;
    std::vector<TraceRecord> trace;
    Residuals residuals;
    std::vector<int> non_turbulent_pipes;

    Eigen::VectorXd flows_gpm() const;
};

/// Fixed-point iteration q^{k+1} = T(q^k) until ||q^k - T(q^k)||_inf <= tol
/// (measured in GPM) or max_iterations updates have been made. Running out
/// of iterations is reported through `converged`, not thrown.
SolveResult solve(const HydraulicSystem& system, const SolverConfig& config = {});

}  // namespace wdn
