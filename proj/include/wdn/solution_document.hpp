#pragma once

#include "wdn/fixed_point.hpp"
#include "wdn/jacobian.hpp"

#include <nlohmann/json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace wdn {

struct ContractionSummary {
    double spectral_radius = 0.0;
    double rate_estimate = 0.0;
    bool is_local_contraction = false;
    std::optional<double> empirical_ratio;
    std::vector<double> eigenvalue_magnitudes;

    bool operator==(const ContractionSummary&) const = default;
};

ContractionSummary summarize(const ContractionReport& report);

/// Machine-readable result of one solve, in GPM and feet.
struct SolutionDocument {
    std::string method = "fp";
    std::vector<double> flows_gpm;  // pipe order
    std::vector<double> heads_ft;   // junction order
    double reservoir_intake_gpm = 0.0;
    int iterations = 0;
    int map_evaluations = 0;
    bool converged = false;
    double continuity_residual_gpm = 0.0;
    double energy_residual_ft = 0.0;
    std::optional<ContractionSummary> contraction;
    std::vector<std::string> warnings;

    bool operator==(const SolutionDocument&) const = default;
};

SolutionDocument make_document(const SolveResult& result);

nlohmann::ordered_json to_json(const SolutionDocument& doc);

/// Throws std::invalid_argument on missing keys or wrong types.
SolutionDocument solution_from_json(const nlohmann::json& j);

std::string serialize(const SolutionDocument& doc);
SolutionDocument parse_solution(const std::string& text);

nlohmann::ordered_json to_json(const ContractionSummary& summary);

}  // namespace wdn
