#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace rvcv::grf {

/// Undirected simple graph as a symmetric 0/1 adjacency matrix, zero diagonal.
struct Graph {
    int n = 0;
    std::vector<std::uint8_t> adj;  // n*n, kept symmetric

    Graph() = default;
    explicit Graph(int nodes);

    std::uint8_t at(int i, int j) const { return adj[static_cast<std::size_t>(i) * n + j]; }
    void set(int i, int j, std::uint8_t v);
    int degree(int i) const;
};

/// (edge count, two-star count). Two-stars are pairs of edges sharing a node,
/// computed per vertex as C(degree, 2).
Eigen::Vector2d ergm_suff_stats(const Graph& graph);

/// Two-star count by enumeration over node triples (independent route, used
/// to cross-check the degree formula).
double ergm_two_stars_by_triples(const Graph& graph);

/// K approximately independent draws from the edge/two-star ERG model at
/// theta = (theta1, theta2), from one systematic single-edge Gibbs chain with
/// `burn_in` sweeps then one draw per `lag` sweeps.
std::vector<Graph> ergm_gibbs_forward(const Eigen::Vector2d& theta, int n,
                                      int burn_in, int lag, int K, std::uint64_t seed);

/// One draw from an independent chain (random init, burn_in sweeps).
Graph ergm_gibbs_single(const Eigen::Vector2d& theta, int n, int burn_in,
                        std::uint64_t seed);

/// Exact log partition by summing over all 2^C(n,2) graphs; n <= 5 only.
double ergm_log_partition_bruteforce(const Eigen::Vector2d& theta, int n);

/// Exact E[s1], E[s2] by the same enumeration (test oracle, n <= 5).
Eigen::Vector2d ergm_mean_stats_bruteforce(const Eigen::Vector2d& theta, int n);

/// Graph files: either a whitespace-separated n x n 0/1 adjacency matrix or
/// an edge list with one "i j" pair (0-indexed) per line. The reader
/// auto-detects the format; the edge-list form takes the node count from the
/// largest index unless `n_hint` > 0.
Graph read_graph(std::istream& in, int n_hint = 0);
Graph read_graph_file(const std::string& path, int n_hint = 0);
void write_adjacency(std::ostream& out, const Graph& graph);
void write_adjacency_file(const std::string& path, const Graph& graph);

/// Edge/two-star ERG model bundle for the exchange sampler.
class ErgmModel {
public:
    using Obs = Graph;

    ErgmModel(int n, int sim_burn_in = 1000, int sim_lag = 1000)
        : n_(n), sim_burn_in_(sim_burn_in), sim_lag_(sim_lag) {}

    int dim() const { return 2; }
    std::string id() const { return "ergm"; }
    int n() const { return n_; }
    int sim_burn_in() const { return sim_burn_in_; }
    int sim_lag() const { return sim_lag_; }

    Eigen::VectorXd suff_stat(const Obs& y) const { return ergm_suff_stats(y); }

    Obs forward_sim(const Eigen::VectorXd& theta, std::uint64_t seed) const {
        return ergm_gibbs_single(Eigen::Vector2d(theta[0], theta[1]), n_, sim_burn_in_, seed);
    }

private:
    int n_;
    int sim_burn_in_;
    int sim_lag_;
};

}  // namespace rvcv::grf
