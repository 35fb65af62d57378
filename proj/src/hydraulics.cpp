#include "wdn/hydraulics.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace wdn {

void require_valid(const FluidProperties& fluid) {
    if (!std::isfinite(fluid.kinematic_viscosity_ft2_s) || fluid.kinematic_viscosity_ft2_s <= 0.0) {
        throw std::invalid_argument("kinematic viscosity must be positive");
    }
    if (!std::isfinite(fluid.turbulence_threshold) || fluid.turbulence_threshold <= 0.0) {
        throw std::invalid_argument("turbulence threshold must be positive");
    }
}

double resistance_coefficient(const Pipe& pipe) {
    const auto bad = [](double x) { return !std::isfinite(x) || x <= 0.0; };
    if (bad(pipe.length_ft) || bad(pipe.diameter_ft) || bad(pipe.roughness)) {
        throw std::invalid_argument("pipe " + std::to_string(pipe.id) +
                                    ": length, diameter and roughness must be positive");
    }
    return kHazenWilliamsFactor * std::pow(pipe.roughness, -kRoughnessExponent) *
           std::pow(pipe.diameter_ft, -kDiameterExponent) * pipe.length_ft;
}

Eigen::VectorXd resistance_vector(const Network& network) {
    Eigen::VectorXd a(network.pipe_count());
    for (int l = 0; l < network.pipe_count(); ++l) {
        a(l) = resistance_coefficient(network.pipes()[l]);
    }
    return a;
}

Eigen::VectorXd head_loss(const Eigen::VectorXd& q, const Eigen::VectorXd& resistance) {
    return resistance.array() * q.array().abs().pow(kFlowExponent) * q.array();
}

Eigen::VectorXd head_loss_derivative(const Eigen::VectorXd& q, const Eigen::VectorXd& resistance) {
    return kHeadLossPower * resistance.array() * q.array().abs().pow(kFlowExponent);
}

double cross_section_area_ft2(const Pipe& pipe) {
    return std::numbers::pi * pipe.diameter_ft * pipe.diameter_ft / 4.0;
}

double reynolds_number(const Pipe& pipe, double q_cfs, const FluidProperties& fluid) {
    return pipe.diameter_ft * std::abs(q_cfs) /
           (fluid.kinematic_viscosity_ft2_s * cross_section_area_ft2(pipe));
}

double min_turbulent_flow(const Pipe& pipe, const FluidProperties& fluid) {
    return fluid.turbulence_threshold * fluid.kinematic_viscosity_ft2_s *
           cross_section_area_ft2(pipe) / pipe.diameter_ft;
}

std::vector<int> non_turbulent_pipes(const Network& network, const Eigen::VectorXd& q,
                                     const FluidProperties& fluid) {
    std::vector<int> ids;
    for (int l = 0; l < network.pipe_count(); ++l) {
        const auto& pipe = network.pipes()[l];
        if (std::abs(q(l)) < min_turbulent_flow(pipe, fluid)) {
            ids.push_back(pipe.id);
        }
    }
    return ids;
}

}  // namespace wdn
