#include "wdn/cli.hpp"

#include "wdn/jacobian.hpp"
#include "wdn/network_file.hpp"
#include "wdn/newton.hpp"
#include "wdn/solution_document.hpp"
#include "wdn/units.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

namespace wdn::cli {

namespace {

struct CommonOptions {
    std::string network_path;
    std::optional<double> tol_gpm;
    std::optional<int> max_iter;
    std::optional<std::string> init_gpm;
};

void add_common(CLI::App& cmd, CommonOptions& opts) {
    cmd.add_option("network", opts.network_path, "Network file")->required();
    cmd.add_option("--tol-gpm", opts.tol_gpm, "Stopping tolerance on ||q - T(q)||_inf in GPM");
    cmd.add_option("--max-iter", opts.max_iter, "Maximum number of iterations");
    cmd.add_option("--init-gpm", opts.init_gpm, "Initial flow in GPM, or @FILE with one value per pipe");
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::invalid_argument("cannot open " + path);
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out || !(out << contents)) {
        throw std::invalid_argument("cannot write " + path);
    }
}

double parse_number(const std::string& token, const std::string& what) {
    std::istringstream in(token);
    in.imbue(std::locale::classic());
    double value = 0.0;
    if (!(in >> value) || !(in >> std::ws).eof()) {
        throw std::invalid_argument("invalid number '" + token + "' for " + what);
    }
    return value;
}

InitialFlow parse_initial_flow(const std::string& spec) {
    if (spec.empty() || spec.front() != '@') {
        return parse_number(spec, "--init-gpm");
    }
    std::string text = read_file(spec.substr(1));
    for (char& c : text) {
        if (c == ',') c = ' ';
    }
    std::istringstream in(text);
    std::vector<double> values;
    for (std::string token; in >> token;) {
        values.push_back(parse_number(token, spec));
    }
    return values;
}

struct Problem {
    NetworkFile file;
    SolverConfig config;
    std::optional<HydraulicSystem> system;
};

Problem load_problem(const CommonOptions& opts) {
    Problem p;
    p.file = load_network_file(opts.network_path);
    p.config = p.file.solver_config();
    if (opts.tol_gpm) p.config.tolerance_gpm = *opts.tol_gpm;
    if (opts.max_iter) p.config.max_iterations = *opts.max_iter;
    if (opts.init_gpm) p.config.initial_flow_gpm = parse_initial_flow(*opts.init_gpm);
    require_valid(p.config);
    p.system.emplace(p.file.network);
    // surfaces a wrong-length per-pipe vector as an input error up front
    initial_flows_cfs(p.config, p.system->pipe_count());
    return p;
}

void print_table(const SolutionDocument& doc, std::ostream& out) {
    out << std::fixed << std::setprecision(2);
    out << (doc.converged ? "converged" : "NOT converged") << " after " << doc.iterations
        << " iterations (" << doc.method << ")\n";
    out << "pipe  flow_gpm\n";
    for (std::size_t l = 0; l < doc.flows_gpm.size(); ++l) {
        out << std::setw(4) << l + 1 << std::setw(12) << doc.flows_gpm[l] << '\n';
    }
    out << "node  head_ft\n";
    for (std::size_t n = 0; n < doc.heads_ft.size(); ++n) {
        out << std::setw(4) << n + 1 << std::setw(12) << doc.heads_ft[n] << '\n';
    }
    out << "reservoir intake: " << doc.reservoir_intake_gpm << " GPM\n";
    if (doc.contraction) {
        out << std::setprecision(4) << "rho=" << doc.contraction->spectral_radius << '\n';
    }
    for (const auto& w : doc.warnings) {
        out << "warning: " << w << '\n';
    }
    out.unsetf(std::ios::floatfield);
}

void print_contraction(const ContractionSummary& c, std::ostream& out) {
    out << std::fixed << std::setprecision(4);
    out << "rho=" << c.spectral_radius << '\n';
    out << "alpha=" << c.rate_estimate << '\n';
    out << "local_contraction=" << (c.is_local_contraction ? "true" : "false") << '\n';
    if (c.empirical_ratio) {
        out << "empirical_ratio=" << *c.empirical_ratio << '\n';
    }
    out.unsetf(std::ios::floatfield);
}

ContractionReport analyze_at(const Eigen::VectorXd& q, const HydraulicSystem& system,
                             const std::vector<TraceRecord>& trace, double floor_cfs) {
    try {
        return contraction_report(q, system, trace, floor_cfs);
    } catch (const std::domain_error& e) {
        throw std::invalid_argument(std::string(e.what()) +
                                    "; the Jacobian involves |q|^-1.852 and is not defined at zero flow");
    }
}

SolutionDocument solve_newton(const HydraulicSystem& system, const SolverConfig& config) {
    FullState start{initial_flows_cfs(config, system.pipe_count()),
                    Eigen::VectorXd::Constant(system.node_count(), system.reservoir_head())};
    NewtonOptions options;
    options.max_iterations = config.max_iterations;
    const NewtonResult nr = newton_solve(system, start, options);

    SolutionDocument doc;
    doc.method = "newton";
    const Eigen::VectorXd flows = nr.state.q * kGpmPerCfs;
    doc.flows_gpm.assign(flows.data(), flows.data() + flows.size());
    doc.heads_ft.assign(nr.state.h.data(), nr.state.h.data() + nr.state.h.size());
    doc.reservoir_intake_gpm = reservoir_intake_gpm(nr.state.q, system.incidence());
    doc.iterations = nr.iterations;
    doc.converged = nr.converged;
    const Residuals r = residuals(nr.state.q, nr.state.h, system);
    doc.continuity_residual_gpm = r.continuity_gpm;
    doc.energy_residual_ft = r.energy_ft;
    if (!nr.converged) {
        doc.warnings.push_back("did not converge: residual " + std::to_string(nr.residual_norm) +
                               " after " + std::to_string(nr.iterations) + " iterations");
    }
    for (int id : non_turbulent_pipes(system.network(), nr.state.q, config.fluid)) {
        doc.warnings.push_back("pipe " + std::to_string(id) +
                               " flow is below the turbulent minimum (Reynolds number under threshold)");
    }
    return doc;
}

int run_solve(const CommonOptions& opts, const std::string& method, const std::string& trace_path,
              const std::string& out_path, bool analyze, std::ostream& out) {
    Problem p = load_problem(opts);
    const HydraulicSystem& system = *p.system;

    SolutionDocument doc;
    std::vector<TraceRecord> trace;
    Eigen::VectorXd q;
    if (method == "newton") {
        if (!trace_path.empty()) {
            throw std::invalid_argument("--trace is only available with --method fp");
        }
        doc = solve_newton(system, p.config);
        q = Eigen::Map<const Eigen::VectorXd>(doc.flows_gpm.data(), static_cast<Eigen::Index>(doc.flows_gpm.size())) /
            kGpmPerCfs;
    } else {
        const SolveResult result = solve(system, p.config);
        doc = make_document(result);
        trace = result.trace;
        q = result.flows_cfs;
        if (!trace_path.empty()) {
            write_file(trace_path, format_trace_csv(result.trace));
        }
    }

    if (analyze) {
        if (doc.converged) {
            doc.contraction = summarize(analyze_at(q, system, trace, p.config.flow_floor_cfs));
        } else {
            doc.warnings.push_back("contraction analysis skipped: solve did not converge");
        }
    }

    if (out_path.empty()) {
        out << serialize(doc);
    } else {
        write_file(out_path, serialize(doc));
        print_table(doc, out);
    }
    return doc.converged ? kOk : kNotConverged;
}

int run_analyze(const CommonOptions& opts, const std::string& solution_path, const std::string& out_path,
                std::ostream& out, std::ostream& err) {
    Problem p = load_problem(opts);
    const HydraulicSystem& system = *p.system;

    Eigen::VectorXd q;
    std::vector<TraceRecord> trace;
    if (!solution_path.empty()) {
        const SolutionDocument doc = parse_solution(read_file(solution_path));
        if (!doc.converged) {
            throw std::invalid_argument(solution_path + " holds a non-converged solution");
        }
        if (static_cast<int>(doc.flows_gpm.size()) != system.pipe_count()) {
            throw std::invalid_argument(solution_path + " has " + std::to_string(doc.flows_gpm.size()) +
                                        " flows, network has " + std::to_string(system.pipe_count()) +
                                        " pipes");
        }
        q = Eigen::Map<const Eigen::VectorXd>(doc.flows_gpm.data(), system.pipe_count()) / kGpmPerCfs;
    } else {
        const SolveResult result = solve(system, p.config);
        if (!result.converged) {
            err << "error: solve did not converge within " << result.iterations
                << " iterations; no fixed point to analyze\n";
            return kNotConverged;
        }
        q = result.flows_cfs;
        trace = result.trace;
    }

    const ContractionReport report = analyze_at(q, system, trace, p.config.flow_floor_cfs);
    const ContractionSummary summary = summarize(report);
    print_contraction(summary, out);

    if (!out_path.empty()) {
        nlohmann::ordered_json j = to_json(summary);
        nlohmann::ordered_json rows = nlohmann::ordered_json::array();
        for (Eigen::Index r = 0; r < report.jacobian.rows(); ++r) {
            std::vector<double> row(report.jacobian.cols());
            for (Eigen::Index c = 0; c < report.jacobian.cols(); ++c) row[c] = report.jacobian(r, c);
            rows.push_back(row);
        }
        j["jacobian"] = rows;
        write_file(out_path, j.dump(2) + "\n");
    }
    return summary.is_local_contraction ? kOk : kNotContraction;
}

}  // namespace

std::string format_trace_csv(const std::vector<TraceRecord>& trace) {
    std::string csv = "iter,step_inf_gpm,ratio\n";
    for (const auto& row : trace) {
        csv += std::to_string(row.iteration) + ',' + format_number(row.step_inf_gpm) + ',';
        if (row.ratio) csv += format_number(*row.ratio);
        csv += '\n';
    }
    return csv;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Steady-state hydraulic solver for pipe-only water networks"};
    app.require_subcommand(1);

    CommonOptions solve_opts;
    std::string method = "fp";
    std::string trace_path;
    std::string solve_out;
    bool analyze = false;
    auto* solve_cmd = app.add_subcommand("solve", "Solve for flows and heads");
    add_common(*solve_cmd, solve_opts);
    solve_cmd->add_option("--method", method, "Solver")->check(CLI::IsMember({"fp", "newton"}));
    solve_cmd->add_option("--trace", trace_path, "Write the iteration trace CSV here");
    solve_cmd->add_option("--out", solve_out, "Write the solution document here (default stdout)");
    solve_cmd->add_flag("--analyze", analyze, "Append the contraction analysis");

    CommonOptions analyze_opts;
    std::string solution_path;
    std::string analyze_out;
    auto* analyze_cmd = app.add_subcommand("analyze", "Jacobian spectral radius at the solution");
    add_common(*analyze_cmd, analyze_opts);
    analyze_cmd->add_option("--solution", solution_path, "Use flows from a prior solution document");
    analyze_cmd->add_option("--out", analyze_out, "Write the contraction report here");

    std::vector<std::string> argv_storage{"wdnfp"};
    argv_storage.insert(argv_storage.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& a : argv_storage) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? kOk : kInputError;
    }

    try {
        if (solve_cmd->parsed()) {
            return run_solve(solve_opts, method, trace_path, solve_out, analyze, out);
        }
        return run_analyze(analyze_opts, solution_path, analyze_out, out, err);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kInputError;
    }
}

}  // namespace wdn::cli
