#pragma once

#include <Eigen/Core>

#include <stdexcept>
#include <utility>

namespace rvcv::sde {

/// SIR diffusion parameters: infection rate theta1, recovery rate theta2,
/// and the population size N scaling the diffusion.
struct SirParams {
    Eigen::Vector2d theta;
    double population;

    SirParams(double theta1, double theta2, double N)
        : theta(theta1, theta2), population(N) {
        if (!(theta1 > 0.0) || !(theta2 > 0.0))
            throw std::invalid_argument("SirParams: rates must be positive");
        if (!(N > 0.0)) throw std::invalid_argument("SirParams: population must be positive");
    }
};

/// Drift alpha(x; theta) = [-theta1 x1 x2, theta1 x1 x2 - theta2 x2].
inline Eigen::Vector2d sir_drift(const Eigen::Vector2d& x, const SirParams& p) {
    const double infect = p.theta[0] * x[0] * x[1];
    return {-infect, infect - p.theta[1] * x[1]};
}

/// Diffusion beta(x; theta) = (1/N) [[a, -a], [-a, a + theta2 x2]] with
/// a = theta1 x1 x2; positive semidefinite whenever x1, x2 >= 0.
inline Eigen::Matrix2d sir_diffusion(const Eigen::Vector2d& x, const SirParams& p) {
    const double a = p.theta[0] * x[0] * x[1] / p.population;
    const double r = p.theta[1] * x[1] / p.population;
    Eigen::Matrix2d beta;
    beta << a, -a, -a, a + r;
    return beta;
}

/// (d alpha / d theta1, d alpha / d theta2) at x.
inline std::pair<Eigen::Vector2d, Eigen::Vector2d> sir_drift_grad(const Eigen::Vector2d& x) {
    const double s = x[0] * x[1];
    return {Eigen::Vector2d(-s, s), Eigen::Vector2d(0.0, -x[1])};
}

/// (d beta / d theta1, d beta / d theta2) at x.
inline std::pair<Eigen::Matrix2d, Eigen::Matrix2d> sir_diffusion_grad(
    const Eigen::Vector2d& x, const SirParams& p) {
    const double s = x[0] * x[1] / p.population;
    Eigen::Matrix2d d1, d2;
    d1 << s, -s, -s, s;
    d2 << 0.0, 0.0, 0.0, x[1] / p.population;
    return {d1, d2};
}

}  // namespace rvcv::sde
