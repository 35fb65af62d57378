#pragma once

#include "wdn/network.hpp"

#include <Eigen/Dense>

#include <vector>

namespace wdn {

// Hazen-Williams constants for U.S. customary units (ft, cfs).
inline constexpr double kHazenWilliamsFactor = 4.727;
inline constexpr double kRoughnessExponent = 1.852;
inline constexpr double kDiameterExponent = 4.871;
inline constexpr double kFlowExponent = 0.852;  // head loss = A |q|^0.852 q
inline constexpr double kHeadLossPower = 1.0 + kFlowExponent;

struct FluidProperties {
    double kinematic_viscosity_ft2_s = 1.21e-5;  // water near 60 F
    double turbulence_threshold = 4000.0;

    bool operator==(const FluidProperties&) const = default;
};

/// Throws std::invalid_argument unless both fields are positive and finite.
void require_valid(const FluidProperties& fluid);

/// A = 4.727 C^-1.852 d^-4.871 l, with d and l in feet.
double resistance_coefficient(const Pipe& pipe);

/// Resistance coefficients for every pipe, in pipe order.
Eigen::VectorXd resistance_vector(const Network& network);

/// hbar_l = A_l |q_l|^0.852 q_l (feet), q in cfs.
Eigen::VectorXd head_loss(const Eigen::VectorXd& q, const Eigen::VectorXd& resistance);

/// d hbar_l / d q_l = 1.852 A_l |q_l|^0.852.
Eigen::VectorXd head_loss_derivative(const Eigen::VectorXd& q, const Eigen::VectorXd& resistance);

double cross_section_area_ft2(const Pipe& pipe);

/// Re = d |q| / (v S) with S = pi d^2 / 4.
double reynolds_number(const Pipe& pipe, double q_cfs, const FluidProperties& fluid);

/// Flow magnitude (cfs) at which the Reynolds number reaches the turbulence threshold.
double min_turbulent_flow(const Pipe& pipe, const FluidProperties& fluid);

/// Ids of pipes whose |q| is below their minimum turbulent flow.
std::vector<int> non_turbulent_pipes(const Network& network, const Eigen::VectorXd& q,
                                     const FluidProperties& fluid);

}  // namespace wdn
