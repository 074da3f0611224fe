#include "rvcv/grf/ergm.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "rvcv/errors.hpp"
#include "rvcv/rng.hpp"

namespace rvcv::grf {

Graph::Graph(int nodes) : n(nodes), adj(static_cast<std::size_t>(nodes) * nodes, 0) {
    if (nodes < 1) throw std::invalid_argument("Graph: need at least 1 node");
}

void Graph::set(int i, int j, std::uint8_t v) {
    if (i == j) throw std::invalid_argument("Graph: no self loops");
    adj[static_cast<std::size_t>(i) * n + j] = v;
    adj[static_cast<std::size_t>(j) * n + i] = v;
}

int Graph::degree(int i) const {
    int d = 0;
    for (int j = 0; j < n; ++j) d += at(i, j);
    return d;
}

Eigen::Vector2d ergm_suff_stats(const Graph& graph) {
    long long edges = 0, two_stars = 0;
    for (int i = 0; i < graph.n; ++i) {
        const long long d = graph.degree(i);
        two_stars += d * (d - 1) / 2;
        for (int j = i + 1; j < graph.n; ++j) edges += graph.at(i, j);
    }
    return {static_cast<double>(edges), static_cast<double>(two_stars)};
}

double ergm_two_stars_by_triples(const Graph& graph) {
    long long s = 0;
    for (int i = 0; i < graph.n; ++i)
        for (int j = i + 1; j < graph.n; ++j)
            for (int k = j + 1; k < graph.n; ++k)
                s += graph.at(i, j) * graph.at(i, k) + graph.at(i, j) * graph.at(j, k) +
                     graph.at(i, k) * graph.at(j, k);
    return static_cast<double>(s);
}

namespace {

// Single-edge Gibbs sampler. The full conditional for a dyad depends on the
// endpoint degrees excluding that dyad, so P(edge) = sigmoid(theta1 + theta2
// * delta2) is read from a table over delta2 = 0..2(n-2).
struct ErgmGibbs {
    Graph g;
    std::vector<int> deg;
    std::vector<std::uint64_t> p_edge;  // raw 64-bit thresholds over delta2

    ErgmGibbs(const Eigen::Vector2d& theta, int n)
        : g(n), deg(n, 0), p_edge(static_cast<std::size_t>(2 * n - 3)) {
        for (std::size_t d = 0; d < p_edge.size(); ++d) {
            const double lo = theta[0] + theta[1] * static_cast<double>(d);
            const double p = 1.0 / (1.0 + std::exp(-lo));
            p_edge[d] = p >= 1.0 ? ~std::uint64_t{0}
                                 : static_cast<std::uint64_t>(p * 0x1.0p64);
        }
    }

    void randomise(Rng& rng) {
        for (int i = 0; i < g.n; ++i)
            for (int j = i + 1; j < g.n; ++j)
                if (rng.bernoulli(0.5)) toggle(i, j, 1);
    }

    void toggle(int i, int j, std::uint8_t v) {
        g.set(i, j, v);
        const int d = v ? 1 : -1;
        deg[i] += d;
        deg[j] += d;
    }

    void sweep(Rng& rng) {
        for (int i = 0; i < g.n; ++i) {
            for (int j = i + 1; j < g.n; ++j) {
                const int present = g.at(i, j);
                const int delta2 = deg[i] + deg[j] - 2 * present;
                const std::uint8_t want = rng.next_u64() < p_edge[delta2] ? 1 : 0;
                if (want != present) toggle(i, j, want);
            }
        }
    }
};

}  // namespace

std::vector<Graph> ergm_gibbs_forward(const Eigen::Vector2d& theta, int n, int burn_in,
                                      int lag, int K, std::uint64_t seed) {
    if (n < 2) throw std::invalid_argument("ergm_gibbs_forward: need n >= 2");
    std::vector<Graph> draws;
    if (K <= 0) return draws;
    draws.reserve(K);

    Rng rng(seed);
    ErgmGibbs chain(theta, n);
    chain.randomise(rng);
    for (int i = 0; i < burn_in; ++i) chain.sweep(rng);
    draws.push_back(chain.g);
    for (int k = 1; k < K; ++k) {
        for (int i = 0; i < lag; ++i) chain.sweep(rng);
        draws.push_back(chain.g);
    }
    return draws;
}

Graph ergm_gibbs_single(const Eigen::Vector2d& theta, int n, int burn_in,
                        std::uint64_t seed) {
    if (n < 2) throw std::invalid_argument("ergm_gibbs_single: need n >= 2");
    Rng rng(seed);
    ErgmGibbs chain(theta, n);
    chain.randomise(rng);
    for (int i = 0; i < burn_in; ++i) chain.sweep(rng);
    return chain.g;
}

namespace {

template <typename Visit>
void enumerate_graphs(int n, Visit&& visit) {
    if (n < 1 || n > 5)
        throw ResourceError("ergm brute force: n must be <= 5 (at most 1024 graphs)");
    const int n_dyads = n * (n - 1) / 2;
    for (std::uint32_t mask = 0; mask < (1u << n_dyads); ++mask) {
        Graph g(n);
        int bit = 0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j, ++bit)
                if ((mask >> bit) & 1) g.set(i, j, 1);
        visit(g);
    }
}

}  // namespace

double ergm_log_partition_bruteforce(const Eigen::Vector2d& theta, int n) {
    std::vector<double> energies;
    enumerate_graphs(n, [&](const Graph& g) {
        energies.push_back(theta.dot(ergm_suff_stats(g)));
    });
    const double max_e = *std::max_element(energies.begin(), energies.end());
    double sum = 0.0;
    for (double e : energies) sum += std::exp(e - max_e);
    return max_e + std::log(sum);
}

Eigen::Vector2d ergm_mean_stats_bruteforce(const Eigen::Vector2d& theta, int n) {
    double max_e = -1e300;
    std::vector<Eigen::Vector2d> stats;
    std::vector<double> energies;
    enumerate_graphs(n, [&](const Graph& g) {
        stats.push_back(ergm_suff_stats(g));
        energies.push_back(theta.dot(stats.back()));
        max_e = std::max(max_e, energies.back());
    });
    Eigen::Vector2d num = Eigen::Vector2d::Zero();
    double den = 0.0;
    for (std::size_t i = 0; i < stats.size(); ++i) {
        const double w = std::exp(energies[i] - max_e);
        num += w * stats[i];
        den += w;
    }
    return num / den;
}

Graph read_graph(std::istream& in, int n_hint) {
    std::vector<std::vector<long>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::vector<long> row;
        long v;
        while (ls >> v) row.push_back(v);
        if (!row.empty()) rows.push_back(std::move(row));
    }
    if (rows.empty()) throw std::invalid_argument("read_graph: empty input");

    // Square 0/1 block => adjacency matrix; otherwise an edge list.
    const bool square = rows.size() > 1 && std::all_of(rows.begin(), rows.end(), [&](const auto& r) {
        return r.size() == rows.size() &&
               std::all_of(r.begin(), r.end(), [](long v) { return v == 0 || v == 1; });
    });

    if (square) {
        const int n = static_cast<int>(rows.size());
        Graph g(n);
        for (int i = 0; i < n; ++i) {
            if (rows[i][i] != 0)
                throw std::invalid_argument("read_graph: nonzero diagonal");
            for (int j = i + 1; j < n; ++j) {
                if (rows[i][j] != rows[j][i])
                    throw std::invalid_argument("read_graph: adjacency not symmetric");
                if (rows[i][j]) g.set(i, j, 1);
            }
        }
        return g;
    }

    long max_node = n_hint - 1;
    for (const auto& r : rows) {
        if (r.size() != 2)
            throw std::invalid_argument("read_graph: expected 'i j' pairs or a 0/1 matrix");
        if (r[0] < 0 || r[1] < 0) throw std::invalid_argument("read_graph: negative node index");
        max_node = std::max({max_node, r[0], r[1]});
    }
    Graph g(static_cast<int>(max_node + 1));
    for (const auto& r : rows) {
        if (r[0] == r[1]) throw std::invalid_argument("read_graph: self loop in edge list");
        g.set(static_cast<int>(r[0]), static_cast<int>(r[1]), 1);
    }
    return g;
}

Graph read_graph_file(const std::string& path, int n_hint) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("read_graph_file: cannot open " + path);
    return read_graph(in, n_hint);
}

void write_adjacency(std::ostream& out, const Graph& graph) {
    for (int i = 0; i < graph.n; ++i) {
        for (int j = 0; j < graph.n; ++j) {
            if (j) out << ' ';
            out << static_cast<int>(graph.at(i, j));
        }
        out << '\n';
    }
}

void write_adjacency_file(const std::string& path, const Graph& graph) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_adjacency_file: cannot open " + path);
    write_adjacency(out, graph);
}

}  // namespace rvcv::grf
