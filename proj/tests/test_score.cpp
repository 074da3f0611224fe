#include <doctest.h>

#include <Eigen/Core>

#include <cmath>
#include <vector>

#include "rvcv/grf/exponential.hpp"
#include "rvcv/grf/ising.hpp"
#include "rvcv/rng.hpp"
#include "rvcv/score.hpp"
#include "rvcv/stats.hpp"

using namespace rvcv;

namespace {

Eigen::VectorXd scalar(double x) { return Eigen::VectorXd::Constant(1, x); }

}  // namespace

TEST_CASE("type I score is the displayed plug-in formula") {
    // Exponential GRF with s(y) = -y, y = 2, simulated statistics {-0.5, -1.5}.
    const std::vector<Eigen::VectorXd> sims = {scalar(-0.5), scalar(-1.5)};
    const auto est = score_type1(scalar(-2.0), sims, scalar(0.0), scalar(1.0));
    CHECK(est.u_hat[0] == doctest::Approx(-1.0));
    CHECK(est.K == 2);
    // Matches the exact score u(1|2) = -2 + 1/1.
    CHECK(est.u_hat[0] == doctest::Approx(grf::ExponentialGrf(2.0).score(1.0)));
}

TEST_CASE("type I score vanishes when the observation matches the simulations") {
    const std::vector<Eigen::VectorXd> sims = {scalar(3.0), scalar(5.0)};
    const auto est = score_type1(scalar(4.0), sims, scalar(0.0));
    CHECK(est.u_hat[0] == doctest::Approx(0.0));
}

TEST_CASE("score estimators reject empty inputs and mismatched dimensions") {
    CHECK_THROWS_AS(score_type1(scalar(0.0), {}, scalar(0.0)), std::invalid_argument);
    CHECK_THROWS_AS(score_type2({}), std::invalid_argument);
    CHECK_THROWS_AS(score_type1(scalar(0.0), {Eigen::VectorXd::Zero(2)}, scalar(0.0)),
                    std::invalid_argument);
}

TEST_CASE("type II score averages the latent scores") {
    Eigen::VectorXd v(2);
    v << 1.5, -0.25;
    CHECK(score_type2({v}).u_hat == v);
    CHECK(score_type2({v, Eigen::VectorXd(-v)}).u_hat.norm() ==
          doctest::Approx(0.0));
}

TEST_CASE("type I estimator is unbiased on the 3x3 lattice at theta = 0") {
    // At theta = 0 the brute-force mean statistic vanishes by +/- symmetry.
    CHECK(grf::ising_mean_stat_bruteforce(0.0, 3, 3) == doctest::Approx(0.0));

    const grf::IsingLattice y(3, 3, 1);  // all +1, s(y) = 12
    const Eigen::VectorXd s_obs = scalar(grf::ising_suff_stat(y));
    const int batches = 300, K = 4;
    Eigen::VectorXd estimates(batches);
    for (int b = 0; b < batches; ++b) {
        std::vector<Eigen::VectorXd> stats;
        for (int k = 0; k < K; ++k) {
            const auto draw =
                grf::ising_gibbs_single(0.0, 3, 3, 20, derive_seed(5, b, k));
            stats.push_back(scalar(grf::ising_suff_stat(draw)));
        }
        estimates[b] = score_type1(s_obs, stats, scalar(0.0)).u_hat[0];
    }
    const double se = iid_se(estimates);
    CHECK(std::abs(estimates.mean() - s_obs[0]) < 4.0 * se);
}

TEST_CASE("score variance scales as 1/K") {
    // Exponential forward simulations: var(u_hat) = 1/(K theta^2).
    const grf::ExponentialGrf model(2.0);
    const Eigen::VectorXd theta = scalar(1.3);
    const Eigen::VectorXd s_obs = model.obs_stats();
    const int reps = 400;

    auto empirical_var = [&](int K, std::uint64_t tag) {
        Eigen::VectorXd u(reps);
        for (int r = 0; r < reps; ++r) {
            std::vector<Eigen::VectorXd> stats;
            for (int k = 0; k < K; ++k)
                stats.push_back(
                    model.suff_stat(model.forward_sim(theta, derive_seed(tag, r, k))));
            u[r] = score_type1(s_obs, stats, scalar(0.0)).u_hat[0];
        }
        return sample_variance(u);
    };

    const double v1 = empirical_var(1, 101);
    const double v10 = empirical_var(10, 102);
    const double v100 = empirical_var(100, 103);
    const double slope = (std::log(v1) - std::log(v100)) / std::log(100.0);
    CHECK(slope == doctest::Approx(1.0).epsilon(0.2));
    CHECK(v1 / v10 == doctest::Approx(10.0).epsilon(0.45));
}
