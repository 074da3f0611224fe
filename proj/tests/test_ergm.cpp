#include <doctest.h>

#include <Eigen/Core>

#include <cmath>
#include <sstream>

#include "rvcv/errors.hpp"
#include "rvcv/grf/ergm.hpp"
#include "rvcv/rng.hpp"
#include "rvcv/stats.hpp"

using namespace rvcv;
using namespace rvcv::grf;

namespace {

Graph random_graph(int n, double p, Rng& rng) {
    Graph g(n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (rng.uniform01() < p) g.set(i, j, 1);
    return g;
}

}  // namespace

TEST_CASE("edge and two-star statistics on canonical graphs") {
    CHECK(ergm_suff_stats(Graph(4)) == Eigen::Vector2d(0, 0));

    Graph triangle(3);
    triangle.set(0, 1, 1);
    triangle.set(1, 2, 1);
    triangle.set(0, 2, 1);
    CHECK(ergm_suff_stats(triangle) == Eigen::Vector2d(3, 3));

    Graph star(4);
    for (int leaf = 1; leaf < 4; ++leaf) star.set(0, leaf, 1);
    CHECK(ergm_suff_stats(star) == Eigen::Vector2d(3, 3));
}

TEST_CASE("degree formula agrees with triple enumeration") {
    Rng rng(15);
    for (int trial = 0; trial < 50; ++trial) {
        const auto g = random_graph(6, 0.2 + 0.6 * rng.uniform01(), rng);
        CHECK(ergm_suff_stats(g)[1] == doctest::Approx(ergm_two_stars_by_triples(g)));
    }
}

TEST_CASE("brute-force partition closed forms") {
    CHECK(ergm_log_partition_bruteforce(Eigen::Vector2d(0, 0), 3) ==
          doctest::Approx(std::log(8.0)));
    for (double t : {-1.0, 0.5, 2.0})
        CHECK(ergm_log_partition_bruteforce(Eigen::Vector2d(t, 0), 2) ==
              doctest::Approx(std::log1p(std::exp(t))));
    CHECK_THROWS_AS(ergm_log_partition_bruteforce(Eigen::Vector2d(0, 0), 6), ResourceError);
}

TEST_CASE("partition is invariant under vertex relabelling") {
    // Independent enumeration route: the statistics are label-invariant, so
    // summing in a permuted edge order must give the same value.
    const Eigen::Vector2d theta(0.3, -0.1);
    const double reference = ergm_log_partition_bruteforce(theta, 4);

    double max_e = -1e300;
    std::vector<double> energies;
    const int perm[4] = {2, 0, 3, 1};
    for (std::uint32_t mask = 0; mask < (1u << 6); ++mask) {
        Graph g(4);
        int bit = 0;
        for (int i = 0; i < 4; ++i)
            for (int j = i + 1; j < 4; ++j, ++bit)
                if ((mask >> bit) & 1) g.set(perm[i], perm[j], 1);
        energies.push_back(theta.dot(ergm_suff_stats(g)));
        max_e = std::max(max_e, energies.back());
    }
    double sum = 0.0;
    for (double e : energies) sum += std::exp(e - max_e);
    CHECK(reference == doctest::Approx(max_e + std::log(sum)).epsilon(1e-12));
}

TEST_CASE("gibbs forward simulation hits exact expectations") {
    SUBCASE("independent edges at theta = 0") {
        const int n = 5, draws = 300;
        Eigen::VectorXd s1(draws);
        for (int i = 0; i < draws; ++i)
            s1[i] = ergm_suff_stats(
                ergm_gibbs_single(Eigen::Vector2d(0, 0), n, 30, derive_seed(3, 1, i)))[0];
        CHECK(std::abs(s1.mean() - 5.0) < 4.0 * iid_se(s1));  // C(5,2)/2
    }
    SUBCASE("strongly negative edge parameter empties the graph") {
        Eigen::VectorXd s1(100);
        for (int i = 0; i < 100; ++i)
            s1[i] = ergm_suff_stats(
                ergm_gibbs_single(Eigen::Vector2d(-10, 0), 6, 50, derive_seed(4, 2, i)))[0];
        CHECK(s1.mean() < 0.05 * 15.0);
    }
    SUBCASE("n = 4 against the brute-force mean statistics") {
        const Eigen::Vector2d theta(-0.5, 0.2);
        const Eigen::Vector2d exact = ergm_mean_stats_bruteforce(theta, 4);
        const int draws = 400;
        Eigen::VectorXd s1(draws), s2(draws);
        for (int i = 0; i < draws; ++i) {
            const auto s =
                ergm_suff_stats(ergm_gibbs_single(theta, 4, 60, derive_seed(6, 3, i)));
            s1[i] = s[0];
            s2[i] = s[1];
        }
        CHECK(std::abs(s1.mean() - exact[0]) < 4.0 * iid_se(s1));
        CHECK(std::abs(s2.mean() - exact[1]) < 4.0 * iid_se(s2));
    }
}

TEST_CASE("forward simulation is seed-deterministic") {
    const auto a = ergm_gibbs_forward(Eigen::Vector2d(-0.5, 0.1), 8, 40, 5, 3, 2024);
    const auto b = ergm_gibbs_forward(Eigen::Vector2d(-0.5, 0.1), 8, 40, 5, 3, 2024);
    for (int k = 0; k < 3; ++k) CHECK(a[k].adj == b[k].adj);
}

TEST_CASE("graph io: adjacency matrix and edge list") {
    Rng rng(8);
    const auto g = random_graph(5, 0.5, rng);

    std::stringstream adjacency;
    write_adjacency(adjacency, g);
    CHECK(read_graph(adjacency).adj == g.adj);

    std::stringstream edges;
    for (int i = 0; i < g.n; ++i)
        for (int j = i + 1; j < g.n; ++j)
            if (g.at(i, j)) edges << i << ' ' << j << '\n';
    CHECK(read_graph(edges, g.n).adj == g.adj);

    std::stringstream asym("0 1\n0 0\n");
    CHECK_THROWS_AS(read_graph(asym), std::invalid_argument);
    std::stringstream loop("2 2\n");
    CHECK_THROWS_AS(read_graph(loop), std::invalid_argument);
}
