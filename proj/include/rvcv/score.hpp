#pragma once

#include <Eigen/Core>

#include <stdexcept>
#include <vector>

namespace rvcv {

/// Unbiased score estimate at a parameter point, together with the number of
/// simulations that produced it.
struct ScoreEstimate {
    Eigen::VectorXd u_hat;
    int K = 0;
    Eigen::VectorXd theta;
};

/// Type I estimator from K forward simulations of the model:
/// u_hat = s(y) - mean_k s(Y_k) + grad log prior. The sum over simulations
/// runs in replicate order so the result does not depend on how the
/// simulations were scheduled.
inline ScoreEstimate score_type1(const Eigen::VectorXd& s_obs,
                                 const std::vector<Eigen::VectorXd>& s_sims,
                                 const Eigen::VectorXd& grad_log_prior,
                                 const Eigen::VectorXd& theta = {}) {
    if (s_sims.empty()) throw std::invalid_argument("score_type1: no simulations");
    const Eigen::Index d = s_obs.size();
    if (grad_log_prior.size() != d)
        throw std::invalid_argument("score_type1: prior gradient dimension mismatch");

    Eigen::VectorXd sum = Eigen::VectorXd::Zero(d);
    for (const auto& s : s_sims) {
        if (s.size() != d) throw std::invalid_argument("score_type1: statistic dimension mismatch");
        sum += s;
    }
    ScoreEstimate est;
    est.u_hat = s_obs - sum / static_cast<double>(s_sims.size()) + grad_log_prior;
    est.K = static_cast<int>(s_sims.size());
    est.theta = theta;
    return est;
}

/// Type II estimator (Fisher's identity): the componentwise mean of the
/// extended-posterior scores u(theta, X_k) over K latent draws.
inline ScoreEstimate score_type2(const std::vector<Eigen::VectorXd>& u_values,
                                 const Eigen::VectorXd& theta = {}) {
    if (u_values.empty()) throw std::invalid_argument("score_type2: no latent draws");
    const Eigen::Index d = u_values.front().size();
    Eigen::VectorXd sum = Eigen::VectorXd::Zero(d);
    for (const auto& u : u_values) {
        if (u.size() != d) throw std::invalid_argument("score_type2: score dimension mismatch");
        sum += u;
    }
    ScoreEstimate est;
    est.u_hat = sum / static_cast<double>(u_values.size());
    est.K = static_cast<int>(u_values.size());
    est.theta = theta;
    return est;
}

}  // namespace rvcv
