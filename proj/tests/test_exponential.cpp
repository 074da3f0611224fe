#include <doctest.h>

#include <Eigen/Core>

#include <cmath>

#include "oracles.hpp"
#include "rvcv/grf/exponential.hpp"
#include "rvcv/polynomial.hpp"
#include "rvcv/rng.hpp"

using rvcv::grf::ExponentialGrf;

TEST_CASE("closed-form posterior quantities") {
    const ExponentialGrf model(2.0);
    CHECK(model.posterior_mean() == doctest::Approx(1.0));
    CHECK(model.score(1.0) == doctest::Approx(-1.0));
    CHECK(model.suff_stat(3.5)[0] == doctest::Approx(-3.5));
    CHECK(model.exact_log_partition(Eigen::VectorXd::Constant(1, 2.0)) ==
          doctest::Approx(-std::log(2.0)));
}

TEST_CASE("posterior density integrates to one") {
    const ExponentialGrf model(2.0);
    const double integral = oracles::simpson(
        [&](double t) { return t > 0.0 ? model.posterior_density(t) : 0.0; }, 1e-12,
        30.0, 20000);
    CHECK(std::abs(integral - 1.0) < 1e-8);
}

TEST_CASE("invalid inputs are rejected") {
    CHECK_THROWS_AS(ExponentialGrf(0.0), std::invalid_argument);
    const ExponentialGrf model(1.0);
    CHECK_THROWS_AS(model.score(0.0), std::invalid_argument);
    CHECK_THROWS_AS(model.posterior_density(-1.0), std::invalid_argument);
}

TEST_CASE("forward simulation matches the exponential distribution") {
    const ExponentialGrf model(2.0);
    const Eigen::VectorXd theta = Eigen::VectorXd::Constant(1, 4.0);
    const int n = 100000;
    double sum = 0.0;
    for (int i = 0; i < n; ++i)
        sum += model.forward_sim(theta, rvcv::derive_seed(9, 0, static_cast<std::uint64_t>(i)));
    CHECK(sum / n == doctest::Approx(0.25).epsilon(0.03));
}

TEST_CASE("degree-two coefficients [0, 1/(2y)] cancel theta exactly") {
    const double y = 2.0;
    const ExponentialGrf model(y);
    Eigen::VectorXd phi(2);
    phi << 0.0, 1.0 / (2.0 * y);
    rvcv::Rng rng(31);
    for (int i = 0; i < 200; ++i) {
        const double theta = 0.05 + 4.0 * rng.uniform01();
        const Eigen::VectorXd t = Eigen::VectorXd::Constant(1, theta);
        const Eigen::VectorXd u = Eigen::VectorXd::Constant(1, model.score(theta));
        const double controlled = theta + phi.dot(rvcv::monomial_map(t, u, {1, 2}));
        CHECK(controlled == doctest::Approx(2.0 / y).epsilon(1e-13));
    }
}
