#include "wdn/jacobian.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>

namespace wdn {

JacobianParts jacobian_parts(const Eigen::VectorXd& q, const HydraulicSystem& system, double floor_cfs) {
    const int n_pipes = system.pipe_count();
    if (q.size() != n_pipes) {
        throw std::invalid_argument("flow vector has wrong length");
    }
    for (int l = 0; l < n_pipes; ++l) {
        if (!(std::abs(q(l)) > floor_cfs)) {
            throw std::domain_error("Jacobian undefined near zero flow on pipe " +
                                    std::to_string(system.network().pipes()[l].id));
        }
    }
    const Eigen::ArrayXd magnitude = q.array().abs();
    const Eigen::ArrayXd sign = q.unaryExpr([](double x) { return flow_sign(x); }).array();
    const Eigen::ArrayXd inv_a = system.resistance().array().inverse();

    JacobianParts parts;
    parts.e = magnitude.pow(-kFlowExponent);
    parts.f = -kFlowExponent * magnitude.pow(-kHeadLossPower) * sign;
    parts.h = inv_a * magnitude.pow(-kHeadLossPower) * sign;
    parts.z = laplacian((inv_a * parts.e.array()).matrix(), system.reduced_incidence());
    return parts;
}

Eigen::MatrixXd jacobian_at(const Eigen::VectorXd& q, const HydraulicSystem& system, double floor_cfs) {
    const JacobianParts parts = jacobian_parts(q, system, floor_cfs);
    const auto& inc = system.reduced_incidence();

    Eigen::LLT<Eigen::MatrixXd> llt(parts.z);
    if (llt.info() != Eigen::Success) {
        throw NumericalError("network numerically disconnected: weighted Laplacian is not positive definite");
    }
    // I' Z^-1 I and the head differences I' Z^-1 s
    const Eigen::MatrixXd coupling = inc.transpose() * llt.solve(inc);
    const Eigen::VectorXd head_diff = inc.transpose() * llt.solve(system.injections());

    Eigen::MatrixXd inner = kFlowExponent * parts.e.asDiagonal() * coupling * parts.h.asDiagonal();
    inner.diagonal() += parts.f;
    return system.resistance().cwiseInverse().asDiagonal() * inner * head_diff.asDiagonal();
}

Eigen::MatrixXd finite_difference_jacobian(const Eigen::VectorXd& q, const HydraulicSystem& system,
                                           double relative_step) {
    const int n_pipes = system.pipe_count();
    if (q.size() != n_pipes) {
        throw std::invalid_argument("flow vector has wrong length");
    }
    if (!(relative_step > 0.0)) {
        throw std::invalid_argument("finite-difference step must be positive");
    }
    Eigen::VectorXd steps(n_pipes);
    for (int l = 0; l < n_pipes; ++l) {
        steps(l) = relative_step * std::max(1.0, std::abs(q(l)));
        if (!(std::abs(q(l)) > 10.0 * steps(l))) {
            throw std::invalid_argument("finite-difference step too large for flow on pipe " +
                                        std::to_string(system.network().pipes()[l].id));
        }
    }

    Eigen::MatrixXd j(n_pipes, n_pipes);
    for (int l = 0; l < n_pipes; ++l) {
        Eigen::VectorXd forward = q;
        Eigen::VectorXd backward = q;
        forward(l) += steps(l);
        backward(l) -= steps(l);
        j.col(l) = (apply_map(forward, system) - apply_map(backward, system)) / (2.0 * steps(l));
    }
    return j;
}

std::vector<double> eigenvalue_magnitudes(const Eigen::MatrixXd& j) {
    if (j.rows() != j.cols()) {
        throw std::invalid_argument("spectral radius needs a square matrix");
    }
    if (j.size() == 0) {
        return {};
    }
    if (!j.allFinite()) {
        throw NumericalError("matrix has non-finite entries");
    }
    Eigen::EigenSolver<Eigen::MatrixXd> solver(j, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success) {
        throw NumericalError("eigenvalue iteration did not converge (matrix norm " +
                             std::to_string(j.norm()) + ")");
    }
    std::vector<double> magnitudes;
    magnitudes.reserve(static_cast<std::size_t>(j.rows()));
    for (const auto& lambda : solver.eigenvalues()) {
        magnitudes.push_back(std::abs(lambda));
    }
    std::sort(magnitudes.begin(), magnitudes.end(), std::greater<>());
    return magnitudes;
}

double spectral_radius(const Eigen::MatrixXd& j) {
    const auto magnitudes = eigenvalue_magnitudes(j);
    return magnitudes.empty() ? 0.0 : magnitudes.front();
}

ContractionReport contraction_report(const Eigen::VectorXd& q, const HydraulicSystem& system,
                                     const std::vector<TraceRecord>& trace, double floor_cfs) {
    ContractionReport report;
    report.jacobian = jacobian_at(q, system, floor_cfs);
    report.eigenvalue_magnitudes = eigenvalue_magnitudes(report.jacobian);
    report.spectral_radius =
        report.eigenvalue_magnitudes.empty() ? 0.0 : report.eigenvalue_magnitudes.front();
    report.is_local_contraction = report.spectral_radius < 1.0;
    report.rate_estimate = report.spectral_radius;
    for (auto it = trace.rbegin(); it != trace.rend(); ++it) {
        if (it->ratio) {
            report.empirical_ratio = it->ratio;
            break;
        }
    }
    return report;
}

}  // namespace wdn
