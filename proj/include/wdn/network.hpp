#pragma once

#include <Eigen/Dense>

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace wdn {

/// Demand node. `demand_gpm` is consumption (non-negative in files); the
/// model injects s_n = -demand, converted to cfs.
struct Junction {
    int id = 0;
    double demand_gpm = 0.0;

    bool operator==(const Junction&) const = default;
};

/// The single fixed-head source. Always node 0.
struct Reservoir {
    int id = 0;
    double head_ft = 0.0;

    bool operator==(const Reservoir&) const = default;
};

/// A pipe oriented from -> to. Diameter is stored in feet.
struct Pipe {
    int id = 0;
    int from = 0;
    int to = 0;
    double length_ft = 0.0;
    double diameter_ft = 0.0;
    double roughness = 0.0;  // Hazen-Williams C

    bool operator==(const Pipe&) const = default;
};

struct Violation {
    std::string message;
    std::optional<int> node;
    std::optional<int> pipe;
};

using ValidationReport = std::vector<Violation>;

class NetworkError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Immutable description of a pipe-only network with one reservoir.
///
/// Construction never throws on model violations; call validate() to get
/// the list of problems. Operations that need a well-formed network
/// (build_incidence, HydraulicSystem) raise NetworkError instead.
class Network {
public:
    Network() = default;
    Network(Reservoir reservoir, std::vector<Junction> junctions, std::vector<Pipe> pipes);

    const Reservoir& reservoir() const { return reservoir_; }
    const std::vector<Junction>& junctions() const { return junctions_; }
    const std::vector<Pipe>& pipes() const { return pipes_; }

    int junction_count() const { return static_cast<int>(junctions_.size()); }
    int pipe_count() const { return static_cast<int>(pipes_.size()); }

    /// Injection vector s (length N, cfs), ordered by junction position.
    Eigen::VectorXd injections_cfs() const;

    double total_demand_gpm() const;

    bool operator==(const Network&) const = default;

private:
    Reservoir reservoir_;
    std::vector<Junction> junctions_;
    std::vector<Pipe> pipes_;
};

ValidationReport validate(const Network& network);

/// Throws NetworkError naming the first violation, if any.
void require_valid(const Network& network);

struct IncidenceDecomposition {
    Eigen::MatrixXd full;           // (N+1) x L, +1 at tail, -1 at head
    Eigen::VectorXd reservoir_row;  // row 0 of `full`
    Eigen::MatrixXd reduced;        // rows 1..N of `full`
};

IncidenceDecomposition build_incidence(const Network& network);

}  // namespace wdn
