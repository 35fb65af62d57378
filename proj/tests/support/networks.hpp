#pragma once

// Test-only network builders: the bundled example network built in code,
// and random connected networks / spanning trees.

#include "wdn/network.hpp"
#include "wdn/units.hpp"

#include <algorithm>
#include <array>
#include <random>
#include <set>
#include <utility>
#include <vector>

namespace wdn::testing {

inline Pipe make_pipe(int id, int from, int to, double length_ft, double diameter_in, double c) {
    return Pipe{id, from, to, length_ft, inches_to_feet(diameter_in), c};
}

inline Network example_network() {
    std::vector<Junction> junctions{{1, 0}, {2, 150}, {3, 150}, {4, 200}, {5, 150}, {6, 0}, {7, 300}};
    std::vector<Pipe> pipes{
        make_pipe(1, 0, 1, 3000, 14, 100), make_pipe(2, 2, 6, 5000, 12, 100),
        make_pipe(3, 2, 3, 5000, 8, 100),  make_pipe(4, 3, 5, 5000, 8, 100),
        make_pipe(5, 5, 6, 5000, 8, 100),  make_pipe(6, 6, 7, 7000, 10, 100),
        make_pipe(7, 3, 4, 5000, 6, 100),  make_pipe(8, 4, 0, 7000, 6, 100),
        make_pipe(9, 1, 2, 3000, 14, 100),
    };
    return Network(Reservoir{0, 850.0}, std::move(junctions), std::move(pipes));
}

// Reference solution, rounded to two decimals.
inline constexpr std::array<double, 9> kReferenceFlowsGpm{815.03, 446.65, 218.38, 3.35,  -146.65,
                                                      300.00, 65.03,  -134.97, 815.03};
inline constexpr std::array<double, 7> kReferenceHeadsFt{846.01, 842.01, 833.14, 829.32,
                                                     833.14, 837.38, 829.84};

inline Pipe random_pipe(std::mt19937_64& rng, int id, int a, int b) {
    static constexpr std::array<double, 7> diameters{6, 8, 10, 12, 14, 16, 18};
    std::uniform_real_distribution<double> length(1000.0, 8000.0);
    std::uniform_real_distribution<double> roughness(90.0, 140.0);
    std::uniform_int_distribution<std::size_t> pick(0, diameters.size() - 1);
    std::bernoulli_distribution flip(0.5);
    if (flip(rng)) std::swap(a, b);
    return make_pipe(id, a, b, length(rng), diameters[pick(rng)], roughness(rng));
}

inline std::vector<Junction> random_junctions(std::mt19937_64& rng, int n) {
    std::uniform_real_distribution<double> demand(10.0, 300.0);
    std::vector<Junction> junctions;
    for (int i = 1; i <= n; ++i) junctions.push_back({i, demand(rng)});
    return junctions;
}

/// Random spanning tree on nodes 0..n plus `extra` chords, no parallel pipes.
inline Network random_network(std::mt19937_64& rng, int n, int extra) {
    std::vector<Pipe> pipes;
    std::set<std::pair<int, int>> used;
    for (int node = 1; node <= n; ++node) {
        std::uniform_int_distribution<int> parent(0, node - 1);
        const int p = parent(rng);
        used.insert({p, node});
        pipes.push_back(random_pipe(rng, static_cast<int>(pipes.size()) + 1, p, node));
    }
    const int max_extra = n * (n + 1) / 2 - n;
    extra = std::min(extra, max_extra);
    std::uniform_int_distribution<int> any(0, n);
    while (extra > 0) {
        int a = any(rng);
        int b = any(rng);
        if (a == b) continue;
        if (a > b) std::swap(a, b);
        if (!used.insert({a, b}).second) continue;
        pipes.push_back(random_pipe(rng, static_cast<int>(pipes.size()) + 1, a, b));
        --extra;
    }
    return Network(Reservoir{0, 850.0}, random_junctions(rng, n), std::move(pipes));
}

inline Network random_tree(std::mt19937_64& rng, int n) { return random_network(rng, n, 0); }

/// Random looped network with N <= 15 and L <= 25.
inline Network random_looped_network(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> nodes(3, 15);
    const int n = nodes(rng);
    std::uniform_int_distribution<int> chords(1, std::min(25 - n, n * (n + 1) / 2 - n));
    return random_network(rng, n, chords(rng));
}

/// Flow vector with |q_l| in [lo, hi] cfs and random signs.
inline Eigen::VectorXd random_flows(std::mt19937_64& rng, int l, double lo, double hi) {
    std::uniform_real_distribution<double> mag(lo, hi);
    std::bernoulli_distribution neg(0.5);
    Eigen::VectorXd q(l);
    for (int i = 0; i < l; ++i) q(i) = (neg(rng) ? -1.0 : 1.0) * mag(rng);
    return q;
}

}  // namespace wdn::testing
