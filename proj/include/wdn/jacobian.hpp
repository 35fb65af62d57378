#pragma once

#include "wdn/fixed_point.hpp"

#include <Eigen/Dense>

#include <optional>
#include <vector>

namespace wdn {

/// Diagonal factors of the map's derivative, stored as vectors.
struct JacobianParts {
    Eigen::VectorXd e;  // |q|^-0.852
    Eigen::VectorXd f;  // -0.852 |q|^-1.852 sign(q)
    Eigen::VectorXd h;  // A^-1 |q|^-1.852 sign(q)
    Eigen::MatrixXd z;  // I A^-1 diag(e) I'
};

/// sign(0) is taken as +1.
inline double flow_sign(double x) { return x >= 0.0 ? 1.0 : -1.0; }

/// Throws std::domain_error if some |q_l| <= floor_cfs.
JacobianParts jacobian_parts(const Eigen::VectorXd& q, const HydraulicSystem& system,
                             double floor_cfs = kDefaultFlowFloorCfs);

/// Closed-form derivative of T at q:
///
///   J = A^-1 [F + 0.852 E I' Z^-1 I H] diag(I' Z^-1 s)
///
/// Differentiating G = A^-1 diag(|q|^-0.852) contributes the 0.852 factor on
/// the coupling term; without it the result disagrees with finite
/// differences and is nonzero on trees, where T is constant.
Eigen::MatrixXd jacobian_at(const Eigen::VectorXd& q, const HydraulicSystem& system,
                            double floor_cfs = kDefaultFlowFloorCfs);

/// Central differences of apply_map, one column per pipe, with step
/// relative_step * max(1, |q_l|). Requires |q_l| > 10 * step so the stencil
/// never crosses the |q| kink; throws std::invalid_argument otherwise.
Eigen::MatrixXd finite_difference_jacobian(const Eigen::VectorXd& q, const HydraulicSystem& system,
                                           double relative_step = 1e-6);

/// Largest eigenvalue modulus of a general (nonsymmetric) square matrix.
double spectral_radius(const Eigen::MatrixXd& j);

/// Eigenvalue moduli sorted in decreasing order.
std::vector<double> eigenvalue_magnitudes(const Eigen::MatrixXd& j);

struct ContractionReport {
    Eigen::MatrixXd jacobian;
    std::vector<double> eigenvalue_magnitudes;
    double spectral_radius = 0.0;
    bool is_local_contraction = false;  // spectral_radius < 1
    double rate_estimate = 0.0;         // alpha, taken as the spectral radius
    std::optional<double> empirical_ratio;
};

/// Local contraction verdict at a (presumed) fixed point q. When a solve
/// trace is given, its last step ratio is recorded for comparison with alpha.
/// Says nothing about the size of the basin.
ContractionReport contraction_report(const Eigen::VectorXd& q, const HydraulicSystem& system,
                                     const std::vector<TraceRecord>& trace = {},
                                     double floor_cfs = kDefaultFlowFloorCfs);

}  // namespace wdn
