#include <doctest.h>

#include <Eigen/Core>

#include <cmath>
#include <sstream>

#include "rvcv/errors.hpp"
#include "rvcv/grf/ising.hpp"
#include "rvcv/rng.hpp"
#include "rvcv/stats.hpp"

using namespace rvcv;
using namespace rvcv::grf;

TEST_CASE("sufficient statistic counts each neighbour pair once") {
    CHECK(ising_suff_stat(IsingLattice(1, 1)) == 0.0);
    CHECK(ising_suff_stat(IsingLattice(2, 2, 1)) == 4.0);

    IsingLattice checker(2, 2, 1);
    checker.at(0, 1) = -1;
    checker.at(1, 0) = -1;
    CHECK(ising_suff_stat(checker) == -4.0);

    // 3x3 all-ones lattice: 2 * 3 * 2 = 12 unordered pairs.
    CHECK(ising_suff_stat(IsingLattice(3, 3, 1)) == 12.0);
}

TEST_CASE("double counting convention rescales the statistic") {
    const IsingLattice y(3, 3, 1);
    const IsingModel single(3, 3), doubled(3, 3, 1000, 500, true);
    CHECK(doubled.suff_stat(y)[0] == doctest::Approx(2.0 * single.suff_stat(y)[0]));
    // And the partition functions satisfy logP_double(t) = logP_single(2t).
    const Eigen::VectorXd t = Eigen::VectorXd::Constant(1, 0.3);
    CHECK(doubled.exact_log_partition(t) ==
          doctest::Approx(ising_log_partition_exact(0.6, 3, 3)));
}

TEST_CASE("closed-form partition values") {
    // 1x2 lattice has a single pair: P = 2 e^t + 2 e^{-t}.
    for (double t : {-0.7, 0.0, 1.3})
        CHECK(ising_log_partition_exact(t, 1, 2) ==
              doctest::Approx(std::log(2.0 * std::exp(t) + 2.0 * std::exp(-t))));
    // At theta = 0 every state has weight one.
    for (auto [r, c] : {std::pair{2, 2}, {3, 3}, {2, 5}, {4, 3}, {16, 16}})
        CHECK(ising_log_partition_exact(0.0, r, c) ==
              doctest::Approx(r * c * std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("recursion matches brute force on small lattices") {
    for (auto [r, c] : {std::pair{2, 2}, {2, 3}, {3, 3}}) {
        for (double t : {-1.0, -0.4, 0.0, 0.4, 1.0}) {
            const double exact = ising_log_partition_exact(t, r, c);
            const double brute = ising_log_partition_bruteforce(t, r, c);
            CHECK(std::abs(exact - brute) <= 1e-10 * std::abs(brute));
        }
    }
    // Orientation must not matter.
    CHECK(ising_log_partition_exact(0.37, 2, 4) ==
          doctest::Approx(ising_log_partition_exact(0.37, 4, 2)));
}

TEST_CASE("partition derivative equals the mean statistic") {
    const double h = 1e-4;
    for (double t : {-0.4, 0.0, 0.3}) {
        const double fd = (ising_log_partition_exact(t + h, 3, 3) -
                           ising_log_partition_exact(t - h, 3, 3)) /
                          (2.0 * h);
        CHECK(std::abs(fd - ising_mean_stat_bruteforce(t, 3, 3)) < 1e-6);
    }
}

TEST_CASE("resource guard on the exact recursion") {
    CHECK_THROWS_AS(ising_log_partition_exact(0.1, 21, 30), ResourceError);
    CHECK_THROWS_AS(ising_log_partition_bruteforce(0.1, 5, 5), ResourceError);
}

TEST_CASE("gibbs draws at theta = 0 are unbiased for s") {
    const int draws = 400;
    Eigen::VectorXd stats(draws);
    const auto lattices = ising_gibbs_forward(0.0, 3, 3, 50, 5, draws, 99);
    for (int i = 0; i < draws; ++i) stats[i] = ising_suff_stat(lattices[i]);
    CHECK(std::abs(stats.mean()) < 4.0 * iid_se(stats));
}

TEST_CASE("gibbs draws at large theta match the brute-force mean") {
    const double t = 2.0;
    const double exact_mean = ising_mean_stat_bruteforce(t, 3, 3);
    CHECK(exact_mean > 10.0);  // concentrates near the all-equal maximum of 12

    const int draws = 300;
    Eigen::VectorXd stats(draws);
    for (int i = 0; i < draws; ++i)
        stats[i] = ising_suff_stat(ising_gibbs_single(t, 3, 3, 80, derive_seed(17, 0, i)));
    CHECK(std::abs(stats.mean() - exact_mean) < 4.0 * iid_se(stats) + 1e-9);
}

TEST_CASE("forward simulation is seed-deterministic") {
    const auto a = ising_gibbs_forward(0.4, 4, 5, 100, 10, 3, 1234);
    const auto b = ising_gibbs_forward(0.4, 4, 5, 100, 10, 3, 1234);
    for (int k = 0; k < 3; ++k) CHECK(a[k].spins == b[k].spins);
    const auto c = ising_gibbs_single(0.4, 4, 5, 100, 777);
    const auto d = ising_gibbs_single(0.4, 4, 5, 100, 777);
    CHECK(c.spins == d.spins);
}

TEST_CASE("grid posterior mean on a balanced dataset is zero") {
    // Two +1 rows over two -1 rows: vertical pairs cancel horizontal ones.
    IsingLattice y(2, 2, 1);
    y.at(1, 0) = -1;
    y.at(1, 1) = -1;
    CHECK(ising_suff_stat(y) == 0.0);
    const double mean = ising_posterior_mean_grid(
        y, 5.0, Eigen::VectorXd::LinSpaced(1601, -40.0, 40.0));
    CHECK(std::abs(mean) < 1e-9);
}

TEST_CASE("tight prior pulls the grid posterior mean to zero") {
    const auto data = ising_gibbs_single(0.4, 3, 3, 200, 5);
    const double mean = ising_posterior_mean_grid(
        data, 0.01, Eigen::VectorXd::LinSpaced(401, -0.06, 0.06));
    CHECK(std::abs(mean) < 1e-3);
}

TEST_CASE("grid validation") {
    const IsingLattice y(2, 2, 1);
    // Even point count.
    CHECK_THROWS_AS(
        ising_posterior_mean_grid(y, 5.0, Eigen::VectorXd::LinSpaced(10, -1.0, 1.0)),
        std::invalid_argument);
    // Far too coarse to cover the mass.
    CHECK_THROWS_AS(
        ising_posterior_mean_grid(y, 5.0, Eigen::VectorXd::LinSpaced(3, -0.1, 0.1)),
        GridError);
}

TEST_CASE("lattice io round trip and 0/1 remapping") {
    IsingLattice y(2, 3, 1);
    y.at(0, 1) = -1;
    y.at(1, 2) = -1;
    std::stringstream buf;
    write_lattice(buf, y);
    const auto back = read_lattice(buf);
    CHECK(back.spins == y.spins);

    std::stringstream zeroone("1 0 1\n0 1 1\n");
    bool remapped = false;
    const auto mapped = read_lattice(zeroone, &remapped);
    CHECK(remapped);
    CHECK(mapped.at(0, 0) == 1);
    CHECK(mapped.at(0, 1) == -1);

    std::stringstream mixed("1 -1\n0 1\n");
    CHECK_THROWS_AS(read_lattice(mixed), std::invalid_argument);
    std::stringstream ragged("1 -1\n1\n");
    CHECK_THROWS_AS(read_lattice(ragged), std::invalid_argument);
}
