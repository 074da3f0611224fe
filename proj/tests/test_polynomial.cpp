#include <doctest.h>

#include <Eigen/Core>

#include "oracles.hpp"
#include "rvcv/polynomial.hpp"
#include "rvcv/rng.hpp"

using rvcv::coefficient_count;
using rvcv::monomial_map;
using rvcv::PolynomialSpec;

TEST_CASE("coefficient counts per dimension and degree") {
    CHECK(coefficient_count({1, 1}) == 1);
    CHECK(coefficient_count({1, 2}) == 2);
    CHECK(coefficient_count({1, 3}) == 3);
    CHECK(coefficient_count({2, 2}) == 5);
    CHECK(coefficient_count({2, 3}) == 9);
    CHECK(coefficient_count({3, 2}) == 9);
    CHECK(coefficient_count({3, 3}) == 19);
    CHECK_THROWS_AS(PolynomialSpec(0, 1), std::invalid_argument);
    CHECK_THROWS_AS(PolynomialSpec(1, 4), std::invalid_argument);
}

TEST_CASE("named monomial map values") {
    using V = Eigen::VectorXd;
    V theta1(1), u1(1);

    theta1 << 2.0;
    u1 << 0.5;
    CHECK(monomial_map(theta1, u1, {1, 1}) == V::Constant(1, 0.5));

    theta1 << 1.0;
    u1 << 0.0;
    {
        const V m = monomial_map(theta1, u1, {1, 2});
        REQUIRE(m.size() == 2);
        CHECK(m[0] == 0.0);
        CHECK(m[1] == 2.0);
    }
    {
        const V m = monomial_map(theta1, u1, {1, 3});
        REQUIRE(m.size() == 3);
        CHECK(m[0] == 0.0);
        CHECK(m[1] == 2.0);
        CHECK(m[2] == 6.0);
    }
    {
        const V theta2 = V::Zero(2), u2 = V::Zero(2);
        const V m = monomial_map(theta2, u2, {2, 2});
        V expected(5);
        expected << 0, 0, 2, 0, 2;
        CHECK(m == expected);
    }
}

TEST_CASE("degree one is the identity on the score estimate") {
    rvcv::Rng rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        const int d = 1 + static_cast<int>(rng.below(4));
        Eigen::VectorXd theta(d), u(d);
        for (int i = 0; i < d; ++i) {
            theta[i] = rng.normal();
            u[i] = rng.normal();
        }
        CHECK(monomial_map(theta, u, {d, 1}) == u);
    }
}

TEST_CASE("phi . m equals Laplacian P + grad P . u for random polynomials") {
    rvcv::Rng rng(17);
    for (int d = 1; d <= 3; ++d) {
        for (int degree = 1; degree <= 3; ++degree) {
            const PolynomialSpec spec(d, degree);
            for (int trial = 0; trial < 10; ++trial) {
                Eigen::VectorXd theta(d), u(d);
                for (int i = 0; i < d; ++i) {
                    theta[i] = 2.0 * rng.normal();
                    u[i] = rng.normal();
                }
                Eigen::VectorXd phi(coefficient_count(spec));
                for (Eigen::Index i = 0; i < phi.size(); ++i) phi[i] = rng.normal();

                const double via_map = phi.dot(monomial_map(theta, u, spec));
                const double via_diff =
                    oracles::control_variate_by_differences(theta, u, phi, spec);
                CHECK(via_map == doctest::Approx(via_diff).epsilon(1e-5));
            }
        }
    }
}

TEST_CASE("dimension mismatches are rejected") {
    Eigen::VectorXd theta(2), u(3);
    theta.setZero();
    u.setZero();
    CHECK_THROWS_AS(monomial_map(theta, u, {2, 2}), std::invalid_argument);
    CHECK_THROWS_AS(monomial_map(u, u, {2, 2}), std::invalid_argument);
    Eigen::VectorXd bad(2);
    bad << 1.0, std::numeric_limits<double>::quiet_NaN();
    Eigen::VectorXd ok = Eigen::VectorXd::Zero(2);
    CHECK_THROWS_AS(monomial_map(bad, ok, {2, 2}), std::invalid_argument);
}
