#pragma once

#include "wdn/fixed_point.hpp"
#include "wdn/hydraulics.hpp"
#include "wdn/network.hpp"

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace wdn {

/// Parse or validation failure, tagged with the 1-based line it refers to
/// (0 when no single line is responsible).
class ParseError : public std::runtime_error {
public:
    ParseError(int line, const std::string& message);
    int line() const { return line_; }

private:
    int line_;
};

/// Solver settings that a file's [OPTIONS] section may carry.
struct SolverOverrides {
    std::optional<double> tolerance_gpm;
    std::optional<int> max_iterations;
    std::optional<double> initial_flow_gpm;
    std::optional<double> flow_floor_cfs;

    bool operator==(const SolverOverrides&) const = default;
};

struct NetworkFile {
    Network network;
    FluidProperties fluid;
    SolverOverrides overrides;

    /// Defaults with the file's overrides applied.
    SolverConfig solver_config() const;
};

// Sectioned text format:
//
//   [OPTIONS]    key value           (viscosity_ft2_s, reynolds_threshold, tolerance_gpm,
//                                     max_iterations, initial_flow_gpm, flow_floor_cfs)
//   [RESERVOIR]  id head_ft          (exactly one row, id 0)
//   [JUNCTIONS]  id demand_gpm
//   [PIPES]      id from to length_ft diameter_in roughness_c
//
// Columns are whitespace separated, '#' starts a comment, sections may
// appear in any order and [OPTIONS] is optional.
NetworkFile parse_network_file(std::string_view text);

NetworkFile load_network_file(const std::filesystem::path& path);

/// Writes a file that parses back to an equal NetworkFile.
std::string format_network_file(const NetworkFile& file);

/// Shortest decimal text that parses back to exactly `value`.
std::string format_number(double value);

}  // namespace wdn
