#include <doctest.h>

#include <Eigen/Core>

#include <cmath>

#include "rvcv/control_variates.hpp"
#include "rvcv/errors.hpp"
#include "rvcv/polynomial.hpp"
#include "rvcv/rng.hpp"
#include "rvcv/stats.hpp"

using namespace rvcv;

namespace {

/// Synthetic correlated (g, m) samples for property tests.
struct Dataset {
    Eigen::VectorXd g;
    Eigen::MatrixXd m;
};

Dataset make_dataset(int n, int p, std::uint64_t seed) {
    Rng rng(seed);
    Dataset d;
    d.g.resize(n);
    d.m.resize(n, p);
    for (int i = 0; i < n; ++i) {
        double signal = 0.0;
        for (int j = 0; j < p; ++j) {
            d.m(i, j) = rng.normal();
            signal += (j + 1) * d.m(i, j);
        }
        d.g[i] = signal + 0.5 * rng.normal();
    }
    return d;
}

}  // namespace

TEST_CASE("two-sample worked example") {
    Eigen::VectorXd g(2);
    g << 1.0, -1.0;
    Eigen::MatrixXd m(2, 1);
    m << 1.0, -1.0;
    for (auto mode : {MomentMode::centered, MomentMode::raw}) {
        const Eigen::VectorXd phi = estimate_optimal_coeffs(g, m, mode);
        CHECK(phi[0] == doctest::Approx(-1.0));
        const Eigen::VectorXd ctrl = controlled_values(g, m, phi);
        CHECK(ctrl[0] == doctest::Approx(0.0));
        CHECK(ctrl[1] == doctest::Approx(0.0));
    }
}

TEST_CASE("constant target gives zero coefficients (centered mode)") {
    Eigen::VectorXd g = Eigen::VectorXd::Constant(20, 3.25);
    Eigen::MatrixXd m(20, 2);
    Rng rng(5);
    for (int i = 0; i < 20; ++i) {
        m(i, 0) = rng.normal();
        m(i, 1) = rng.uniform01();
    }
    const Eigen::VectorXd phi = estimate_optimal_coeffs(g, m);
    CHECK(phi.norm() == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("zero coefficients leave the samples untouched") {
    const auto d = make_dataset(50, 3, 9);
    const Eigen::VectorXd ctrl =
        controlled_values(d.g, d.m, Eigen::VectorXd::Zero(3));
    CHECK(ctrl == d.g);
}

TEST_CASE("fitted coefficients minimise the empirical variance") {
    const auto d = make_dataset(400, 4, 21);
    const Eigen::VectorXd phi = estimate_optimal_coeffs(d.g, d.m);
    const double v0 = sample_variance(controlled_values(d.g, d.m, phi).eval());
    for (int j = 0; j < 4; ++j) {
        for (double eps : {-1e-3, 1e-3}) {
            Eigen::VectorXd perturbed = phi;
            perturbed[j] += eps;
            const double v =
                sample_variance(controlled_values(d.g, d.m, perturbed).eval());
            CHECK(v >= v0 - 1e-12);
        }
    }
}

TEST_CASE("1/R equals 1 - rho^2 at the fitted coefficients") {
    for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
        const auto d = make_dataset(300, 5, seed);
        const Eigen::VectorXd phi = estimate_optimal_coeffs(d.g, d.m);
        const auto diag =
            variance_reduction_factor(d.g, controlled_values(d.g, d.m, phi).eval());
        CHECK(std::abs(1.0 / diag.R - (1.0 - diag.rho * diag.rho)) <
              1e-10 * (1.0 / diag.R));
    }
}

TEST_CASE("duplicate basis columns raise a degenerate-design error") {
    auto d = make_dataset(60, 2, 33);
    Eigen::MatrixXd m(60, 3);
    m.leftCols(2) = d.m;
    m.col(2) = d.m.col(0);  // exact collinearity
    try {
        estimate_optimal_coeffs(d.g, m);
        FAIL("expected DegenerateDesignError");
    } catch (const DegenerateDesignError& e) {
        CHECK(e.condition_number() > 1e12);
    }
}

TEST_CASE("sample-count preconditions") {
    Eigen::VectorXd g(4);
    g << 1, 2, 3, 4;
    Eigen::MatrixXd m = Eigen::MatrixXd::Random(4, 3);
    CHECK_THROWS_AS(estimate_optimal_coeffs(g, m), std::invalid_argument);  // 4 < 3+2
    Eigen::MatrixXd wrong = Eigen::MatrixXd::Random(5, 3);
    CHECK_THROWS_AS(estimate_optimal_coeffs(g, wrong), std::invalid_argument);
    CHECK_THROWS_AS(controlled_values(g, m, Eigen::VectorXd::Zero(2)),
                    std::invalid_argument);
}

TEST_CASE("variance reduction diagnostics") {
    Eigen::VectorXd g(2), c(2);
    g << 2.0, -2.0;  // sample variance 8
    c << 1.0, -1.0;  // sample variance 2
    const auto diag = variance_reduction_factor(g, c);
    CHECK(diag.R == doctest::Approx(4.0));
    CHECK_FALSE(diag.infinite_R);

    SUBCASE("constant controlled values flag an infinite R") {
        Eigen::VectorXd flat = Eigen::VectorXd::Constant(2, 7.0);
        const auto perfect = variance_reduction_factor(g, flat);
        CHECK(perfect.infinite_R);
        CHECK(std::isinf(perfect.R));
        CHECK(perfect.rho == doctest::Approx(-1.0));
    }
}
