#pragma once

#include <Eigen/Core>

#include <cmath>
#include <stdexcept>
#include <string>

#include "rvcv/rng.hpp"

namespace rvcv::grf {

/// Tractable reference model: y ~ Exp(theta) with a flat prior on theta > 0.
/// Viewed as a Gibbs random field it has s(y) = -y and partition function
/// 1/theta, but every quantity of interest is available in closed form, which
/// makes it the calibration target for everything else.
class ExponentialGrf {
public:
    using Obs = double;

    explicit ExponentialGrf(double y) : y_(y) {
        if (!(y > 0.0)) throw std::invalid_argument("ExponentialGrf: y must be positive");
    }

    int dim() const { return 1; }
    std::string id() const { return "exponential"; }
    double y() const { return y_; }

    /// Exact posterior score u(theta|y) = -y + 1/theta.
    double score(double theta) const {
        check_theta(theta);
        return -y_ + 1.0 / theta;
    }

    /// Exact posterior mean E[theta|y] = 2/y.
    double posterior_mean() const { return 2.0 / y_; }

    /// Posterior density p(theta|y) = y^2 theta exp(-theta y).
    double posterior_density(double theta) const {
        check_theta(theta);
        return y_ * y_ * theta * std::exp(-theta * y_);
    }

    Eigen::VectorXd suff_stat(Obs y) const {
        return Eigen::VectorXd::Constant(1, -y);
    }

    Obs forward_sim(const Eigen::VectorXd& theta, std::uint64_t seed) const {
        check_theta(theta[0]);
        Rng rng(seed);
        return rng.exponential(theta[0]);
    }

    Eigen::VectorXd obs_stats() const { return suff_stat(y_); }

    double exact_log_partition(const Eigen::VectorXd& theta) const {
        check_theta(theta[0]);
        return -std::log(theta[0]);
    }

private:
    static void check_theta(double theta) {
        if (!(theta > 0.0))
            throw std::invalid_argument("ExponentialGrf: theta must be positive");
    }

    double y_;
};

}  // namespace rvcv::grf
