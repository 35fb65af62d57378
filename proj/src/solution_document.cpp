#include "wdn/solution_document.hpp"

#include "wdn/units.hpp"

#include <stdexcept>

namespace wdn {

namespace {

std::vector<double> to_std(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

}  // namespace

ContractionSummary summarize(const ContractionReport& report) {
    return ContractionSummary{report.spectral_radius, report.rate_estimate, report.is_local_contraction,
                              report.empirical_ratio, report.eigenvalue_magnitudes};
}

SolutionDocument make_document(const SolveResult& result) {
    SolutionDocument doc;
    doc.method = "fp";
    doc.flows_gpm = to_std(result.flows_gpm());
    doc.heads_ft = to_std(result.heads_ft);
    doc.reservoir_intake_gpm = result.reservoir_intake_gpm;
    doc.iterations = result.iterations;
    doc.map_evaluations = result.map_evaluations;
    doc.converged = result.converged;
    doc.continuity_residual_gpm = result.residuals.continuity_gpm;
    doc.energy_residual_ft = result.residuals.energy_ft;
    if (!result.converged) {
        doc.warnings.push_back("did not converge: final step " + std::to_string(result.final_step_gpm) +
                               " GPM after " + std::to_string(result.iterations) + " iterations");
    }
    if (result.floor_activations > 0) {
        doc.warnings.push_back("flow floor activated " + std::to_string(result.floor_activations) +
                               " times during iteration");
    }
    for (int id : result.non_turbulent_pipes) {
        doc.warnings.push_back("pipe " + std::to_string(id) +
                               " flow is below the turbulent minimum (Reynolds number under threshold)");
    }
    return doc;
}

nlohmann::ordered_json to_json(const ContractionSummary& summary) {
    nlohmann::ordered_json j;
    j["rho"] = summary.spectral_radius;
    j["alpha"] = summary.rate_estimate;
    j["local_contraction"] = summary.is_local_contraction;
    j["empirical_ratio"] = summary.empirical_ratio ? nlohmann::ordered_json(*summary.empirical_ratio)
                                                   : nlohmann::ordered_json(nullptr);
    j["eigenvalue_magnitudes"] = summary.eigenvalue_magnitudes;
    return j;
}

nlohmann::ordered_json to_json(const SolutionDocument& doc) {
    nlohmann::ordered_json j;
    j["method"] = doc.method;
    j["converged"] = doc.converged;
    j["iterations"] = doc.iterations;
    j["map_evaluations"] = doc.map_evaluations;
    j["flows_gpm"] = doc.flows_gpm;
    j["heads_ft"] = doc.heads_ft;
    j["reservoir_intake_gpm"] = doc.reservoir_intake_gpm;
    j["residuals"] = {{"continuity_gpm", doc.continuity_residual_gpm}, {"energy_ft", doc.energy_residual_ft}};
    j["contraction"] = doc.contraction ? to_json(*doc.contraction) : nlohmann::ordered_json(nullptr);
    j["warnings"] = doc.warnings;
    return j;
}

SolutionDocument solution_from_json(const nlohmann::json& j) {
    try {
        SolutionDocument doc;
        doc.method = j.at("method").get<std::string>();
        doc.converged = j.at("converged").get<bool>();
        doc.iterations = j.at("iterations").get<int>();
        doc.map_evaluations = j.value("map_evaluations", 0);
        doc.flows_gpm = j.at("flows_gpm").get<std::vector<double>>();
        doc.heads_ft = j.at("heads_ft").get<std::vector<double>>();
        doc.reservoir_intake_gpm = j.at("reservoir_intake_gpm").get<double>();
        doc.continuity_residual_gpm = j.at("residuals").at("continuity_gpm").get<double>();
        doc.energy_residual_ft = j.at("residuals").at("energy_ft").get<double>();
        if (const auto& c = j.at("contraction"); !c.is_null()) {
            ContractionSummary summary;
            summary.spectral_radius = c.at("rho").get<double>();
            summary.rate_estimate = c.at("alpha").get<double>();
            summary.is_local_contraction = c.at("local_contraction").get<bool>();
            if (const auto& r = c.at("empirical_ratio"); !r.is_null()) summary.empirical_ratio = r.get<double>();
            summary.eigenvalue_magnitudes = c.at("eigenvalue_magnitudes").get<std::vector<double>>();
            doc.contraction = summary;
        }
        doc.warnings = j.at("warnings").get<std::vector<std::string>>();
        return doc;
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("malformed solution document: ") + e.what());
    }
}

std::string serialize(const SolutionDocument& doc) { return to_json(doc).dump(2) + "\n"; }

SolutionDocument parse_solution(const std::string& text) {
    try {
        return solution_from_json(nlohmann::json::parse(text));
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument(std::string("solution document is not valid JSON: ") + e.what());
    }
}

}  // namespace wdn
