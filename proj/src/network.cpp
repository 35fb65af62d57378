#include "wdn/network.hpp"

#include "wdn/units.hpp"

#include <cmath>
#include <numeric>
#include <queue>
#include <sstream>
#include <utility>

namespace wdn {

Network::Network(Reservoir reservoir, std::vector<Junction> junctions, std::vector<Pipe> pipes)
    : reservoir_(reservoir), junctions_(std::move(junctions)), pipes_(std::move(pipes)) {}

Eigen::VectorXd Network::injections_cfs() const {
    Eigen::VectorXd s(junction_count());
    for (int n = 0; n < junction_count(); ++n) {
        s(n) = -gpm_to_cfs(junctions_[n].demand_gpm);
    }
    return s;
}

double Network::total_demand_gpm() const {
    return std::accumulate(junctions_.begin(), junctions_.end(), 0.0,
                           [](double acc, const Junction& j) { return acc + j.demand_gpm; });
}

namespace {

bool positive_finite(double x) { return std::isfinite(x) && x > 0.0; }

Violation node_violation(std::string message, int node) {
    return Violation{std::move(message), node, std::nullopt};
}

Violation pipe_violation(std::string message, int pipe) {
    return Violation{std::move(message), std::nullopt, pipe};
}

}  // namespace

ValidationReport validate(const Network& network) {
    ValidationReport report;
    const auto& reservoir = network.reservoir();
    const int n_junctions = network.junction_count();

    if (reservoir.id != 0) {
        report.push_back(node_violation(
            "reservoir id must be 0, got " + std::to_string(reservoir.id), reservoir.id));
    }
    if (!positive_finite(reservoir.head_ft)) {
        report.push_back(node_violation("reservoir head must be finite and positive", 0));
    }
    if (n_junctions == 0) {
        report.push_back(Violation{"network has no junctions", std::nullopt, std::nullopt});
    }

    for (int n = 0; n < n_junctions; ++n) {
        const auto& j = network.junctions()[n];
        if (j.id != n + 1) {
            report.push_back(node_violation("junction ids must be contiguous 1..N: expected " +
                                                std::to_string(n + 1) + ", got " +
                                                std::to_string(j.id),
                                            j.id));
        }
        if (!std::isfinite(j.demand_gpm) || j.demand_gpm < 0.0) {
            report.push_back(
                node_violation("junction " + std::to_string(j.id) + " demand must be >= 0", j.id));
        }
    }

    std::vector<std::vector<int>> adjacency(static_cast<std::size_t>(n_junctions) + 1);
    for (int l = 0; l < network.pipe_count(); ++l) {
        const auto& p = network.pipes()[l];
        const std::string name = "pipe " + std::to_string(p.id);
        if (p.id != l + 1) {
            report.push_back(pipe_violation("pipe ids must be contiguous 1..L: expected " +
                                                std::to_string(l + 1) + ", got " +
                                                std::to_string(p.id),
                                            p.id));
        }
        if (!positive_finite(p.length_ft)) {
            report.push_back(pipe_violation(name + " length must be positive", p.id));
        }
        if (!positive_finite(p.diameter_ft)) {
            report.push_back(pipe_violation(name + " diameter must be positive", p.id));
        }
        if (!positive_finite(p.roughness)) {
            report.push_back(pipe_violation(name + " roughness must be positive", p.id));
        }
        bool endpoints_ok = true;
        for (int end : {p.from, p.to}) {
            if (end < 0 || end > n_junctions) {
                report.push_back(pipe_violation(
                    name + " endpoint " + std::to_string(end) + " does not exist", p.id));
                endpoints_ok = false;
            }
        }
        if (p.from == p.to) {
            report.push_back(pipe_violation("self-loop " + name, p.id));
            endpoints_ok = false;
        }
        if (endpoints_ok) {
            adjacency[p.from].push_back(p.to);
            adjacency[p.to].push_back(p.from);
        }
    }

    std::vector<bool> reached(adjacency.size(), false);
    std::queue<int> frontier;
    reached[0] = true;
    frontier.push(0);
    while (!frontier.empty()) {
        const int u = frontier.front();
        frontier.pop();
        for (int v : adjacency[u]) {
            if (!reached[v]) {
                reached[v] = true;
                frontier.push(v);
            }
        }
    }
    std::ostringstream unreachable;
    std::optional<int> first_unreachable;
    for (int n = 1; n <= n_junctions; ++n) {
        if (!reached[n]) {
            if (first_unreachable) unreachable << ", ";
            unreachable << n;
            if (!first_unreachable) first_unreachable = n;
        }
    }
    if (first_unreachable) {
        report.push_back(node_violation(
            "disconnected: node(s) " + unreachable.str() + " not reachable from the reservoir",
            *first_unreachable));
    }
    return report;
}

void require_valid(const Network& network) {
    const auto report = validate(network);
    if (!report.empty()) {
        throw NetworkError("invalid network: " + report.front().message);
    }
}

IncidenceDecomposition build_incidence(const Network& network) {
    require_valid(network);
    const int n = network.junction_count();
    const int l = network.pipe_count();

    IncidenceDecomposition inc;
    inc.full = Eigen::MatrixXd::Zero(n + 1, l);
    for (int k = 0; k < l; ++k) {
        const auto& p = network.pipes()[k];
        inc.full(p.from, k) = 1.0;
        inc.full(p.to, k) = -1.0;
    }
    inc.reservoir_row = inc.full.row(0).transpose();
    inc.reduced = inc.full.bottomRows(n);
    return inc;
}

}  // namespace wdn
