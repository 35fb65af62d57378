#include "wdn/network_file.hpp"

#include "wdn/units.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

namespace wdn {

ParseError::ParseError(int line, const std::string& message)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + message : message),
      line_(line) {}

SolverConfig NetworkFile::solver_config() const {
    SolverConfig config;
    config.fluid = fluid;
    if (overrides.tolerance_gpm) config.tolerance_gpm = *overrides.tolerance_gpm;
    if (overrides.max_iterations) config.max_iterations = *overrides.max_iterations;
    if (overrides.initial_flow_gpm) config.initial_flow_gpm = *overrides.initial_flow_gpm;
    if (overrides.flow_floor_cfs) config.flow_floor_cfs = *overrides.flow_floor_cfs;
    return config;
}

namespace {

enum class Section { None, Options, Reservoir, Junctions, Pipes };

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_columns(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
        const std::size_t start = i;
        while (i < s.size() && s[i] != ' ' && s[i] != '\t') ++i;
        if (i > start) out.push_back(s.substr(start, i - start));
    }
    return out;
}

double parse_double(std::string_view token, int line, std::string_view what) {
    // from_chars rejects a leading '+', accept it for hand-written files
    if (!token.empty() && token.front() == '+') token.remove_prefix(1);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc{} || ptr != token.data() + token.size() || !std::isfinite(value)) {
        throw ParseError(line, "invalid number '" + std::string(token) + "' for " + std::string(what));
    }
    return value;
}

int parse_int(std::string_view token, int line, std::string_view what) {
    int value = 0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc{} || ptr != token.data() + token.size()) {
        throw ParseError(line, "invalid integer '" + std::string(token) + "' for " + std::string(what));
    }
    return value;
}

void expect_columns(const std::vector<std::string_view>& cols, std::size_t n, int line,
                    std::string_view section) {
    if (cols.size() != n) {
        throw ParseError(line, std::string(section) + " rows need " + std::to_string(n) +
                                   " columns, got " + std::to_string(cols.size()));
    }
}

Section section_from_name(std::string_view name, int line) {
    if (name == "OPTIONS") return Section::Options;
    if (name == "RESERVOIR") return Section::Reservoir;
    if (name == "JUNCTIONS") return Section::Junctions;
    if (name == "PIPES") return Section::Pipes;
    throw ParseError(line, "unknown section [" + std::string(name) + "]");
}

}  // namespace

NetworkFile parse_network_file(std::string_view text) {
    NetworkFile file;
    Section section = Section::None;
    std::map<Section, int> section_lines;
    std::map<std::string, int> option_lines;
    std::optional<Reservoir> reservoir;
    int reservoir_line = 0;
    std::map<int, std::pair<Junction, int>> junctions;
    std::map<int, std::pair<Pipe, int>> pipes;

    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto eol = text.find('\n', pos);
        std::string_view raw = text.substr(pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
        ++line_no;

        if (const auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
        const std::string_view line = trim(raw);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']') throw ParseError(line_no, "malformed section header");
            section = section_from_name(trim(line.substr(1, line.size() - 2)), line_no);
            if (!section_lines.emplace(section, line_no).second) {
                throw ParseError(line_no, "duplicate section " + std::string(line));
            }
            continue;
        }

        const auto cols = split_columns(line);
        switch (section) {
            case Section::None:
                throw ParseError(line_no, "data outside of any section");
            case Section::Options: {
                expect_columns(cols, 2, line_no, "[OPTIONS]");
                const std::string key(cols[0]);
                if (!option_lines.emplace(key, line_no).second) {
                    throw ParseError(line_no, "duplicate option " + key);
                }
                const double value = parse_double(cols[1], line_no, key);
                if (key == "viscosity_ft2_s") {
                    file.fluid.kinematic_viscosity_ft2_s = value;
                } else if (key == "reynolds_threshold") {
                    file.fluid.turbulence_threshold = value;
                } else if (key == "tolerance_gpm") {
                    file.overrides.tolerance_gpm = value;
                } else if (key == "max_iterations") {
                    file.overrides.max_iterations = parse_int(cols[1], line_no, key);
                } else if (key == "initial_flow_gpm") {
                    file.overrides.initial_flow_gpm = value;
                } else if (key == "flow_floor_cfs") {
                    file.overrides.flow_floor_cfs = value;
                } else {
                    throw ParseError(line_no, "unknown option " + key);
                }
                break;
            }
            case Section::Reservoir: {
                expect_columns(cols, 2, line_no, "[RESERVOIR]");
                if (reservoir) throw ParseError(line_no, "only one reservoir row is allowed");
                reservoir = Reservoir{parse_int(cols[0], line_no, "reservoir id"),
                                      parse_double(cols[1], line_no, "head_ft")};
                reservoir_line = line_no;
                break;
            }
            case Section::Junctions: {
                expect_columns(cols, 2, line_no, "[JUNCTIONS]");
                Junction j{parse_int(cols[0], line_no, "junction id"),
                           parse_double(cols[1], line_no, "demand_gpm")};
                if (!junctions.emplace(j.id, std::pair{j, line_no}).second) {
                    throw ParseError(line_no, "duplicate junction id " + std::to_string(j.id));
                }
                break;
            }
            case Section::Pipes: {
                expect_columns(cols, 6, line_no, "[PIPES]");
                Pipe p;
                p.id = parse_int(cols[0], line_no, "pipe id");
                p.from = parse_int(cols[1], line_no, "from");
                p.to = parse_int(cols[2], line_no, "to");
                p.length_ft = parse_double(cols[3], line_no, "length_ft");
                p.diameter_ft = inches_to_feet(parse_double(cols[4], line_no, "diameter_in"));
                p.roughness = parse_double(cols[5], line_no, "roughness_c");
                if (!pipes.emplace(p.id, std::pair{p, line_no}).second) {
                    throw ParseError(line_no, "duplicate pipe id " + std::to_string(p.id));
                }
                break;
            }
        }
    }

    for (auto [required, name] : {std::pair{Section::Reservoir, "[RESERVOIR]"},
                                  std::pair{Section::Junctions, "[JUNCTIONS]"},
                                  std::pair{Section::Pipes, "[PIPES]"}}) {
        if (!section_lines.contains(required)) {
            throw ParseError(0, std::string("missing section ") + name);
        }
    }
    if (!reservoir) {
        throw ParseError(section_lines[Section::Reservoir], "[RESERVOIR] needs one row");
    }

    std::vector<Junction> junction_list;
    for (const auto& [id, entry] : junctions) junction_list.push_back(entry.first);
    std::vector<Pipe> pipe_list;
    for (const auto& [id, entry] : pipes) pipe_list.push_back(entry.first);
    file.network = Network(*reservoir, std::move(junction_list), std::move(pipe_list));

    try {
        require_valid(file.fluid);
    } catch (const std::invalid_argument& e) {
        throw ParseError(section_lines.contains(Section::Options) ? section_lines[Section::Options] : 0,
                         e.what());
    }

    const auto report = validate(file.network);
    if (!report.empty()) {
        const Violation& first = report.front();
        int line = 0;
        if (first.pipe && pipes.contains(*first.pipe)) {
            line = pipes.at(*first.pipe).second;
        } else if (first.node && *first.node == reservoir->id) {
            line = reservoir_line;
        } else if (first.node && junctions.contains(*first.node)) {
            line = junctions.at(*first.node).second;
        } else {
            line = section_lines[Section::Junctions];
        }
        std::string message = first.message;
        if (report.size() > 1) {
            message += " (and " + std::to_string(report.size() - 1) + " more)";
        }
        throw ParseError(line, message);
    }
    return file;
}

NetworkFile load_network_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ParseError(0, "cannot open " + path.string());
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_network_file(buffer.str());
}

std::string format_number(double value) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, ptr);
}

namespace {

// Inch value whose conversion back to feet reproduces diameter_ft exactly.
double diameter_inches_for(double diameter_ft) {
    double inches = feet_to_inches(diameter_ft);
    double up = inches;
    double down = inches;
    for (int i = 0; i < 8; ++i) {
        if (inches_to_feet(up) == diameter_ft) return up;
        if (inches_to_feet(down) == diameter_ft) return down;
        up = std::nextafter(up, INFINITY);
        down = std::nextafter(down, -INFINITY);
    }
    return inches;
}

}  // namespace

std::string format_network_file(const NetworkFile& file) {
    std::ostringstream out;
    const FluidProperties defaults;
    const auto& o = file.overrides;
    const bool any_option = file.fluid != defaults || o != SolverOverrides{};
    if (any_option) {
        out << "[OPTIONS]\n";
        if (file.fluid.kinematic_viscosity_ft2_s != defaults.kinematic_viscosity_ft2_s)
            out << "viscosity_ft2_s " << format_number(file.fluid.kinematic_viscosity_ft2_s) << '\n';
        if (file.fluid.turbulence_threshold != defaults.turbulence_threshold)
            out << "reynolds_threshold " << format_number(file.fluid.turbulence_threshold) << '\n';
        if (o.tolerance_gpm) out << "tolerance_gpm " << format_number(*o.tolerance_gpm) << '\n';
        if (o.max_iterations) out << "max_iterations " << *o.max_iterations << '\n';
        if (o.initial_flow_gpm) out << "initial_flow_gpm " << format_number(*o.initial_flow_gpm) << '\n';
        if (o.flow_floor_cfs) out << "flow_floor_cfs " << format_number(*o.flow_floor_cfs) << '\n';
        out << '\n';
    }

    const auto& net = file.network;
    out << "[RESERVOIR]\n# id head_ft\n"
        << net.reservoir().id << ' ' << format_number(net.reservoir().head_ft) << "\n\n";

    out << "[JUNCTIONS]\n# id demand_gpm\n";
    for (const auto& j : net.junctions()) {
        out << j.id << ' ' << format_number(j.demand_gpm) << '\n';
    }

    out << "\n[PIPES]\n# id from to length_ft diameter_in roughness_c\n";
    for (const auto& p : net.pipes()) {
        out << p.id << ' ' << p.from << ' ' << p.to << ' ' << format_number(p.length_ft) << ' '
            << format_number(diameter_inches_for(p.diameter_ft)) << ' ' << format_number(p.roughness)
            << '\n';
    }
    return out.str();
}

}  // namespace wdn
