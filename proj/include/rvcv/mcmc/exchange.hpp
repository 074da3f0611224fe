#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "rvcv/errors.hpp"
#include "rvcv/mcmc/chain.hpp"
#include "rvcv/parallel.hpp"
#include "rvcv/rng.hpp"
#include "rvcv/score.hpp"

namespace rvcv::mcmc {

/// Per-iterate score-simulation settings for Type I chains.
struct ScoreSimConfig {
    int K = 1;
    unsigned workers = 1;
    /// When set, an accepted iterate reuses the exchange pseudo-draw as one
    /// of the K score simulations (the draw is then at the current theta, so
    /// it is a valid sample); on rejection fresh draws are always used.
    bool count_exchange_draw = false;
};

/// Symmetric Gaussian random walk; the Hastings ratio is one.
struct GaussianProposal {
    Eigen::VectorXd sd;

    Eigen::VectorXd sample(Rng& rng, const Eigen::VectorXd& theta) const {
        Eigen::VectorXd out(theta.size());
        for (Eigen::Index j = 0; j < theta.size(); ++j)
            out[j] = theta[j] + sd[j] * rng.normal();
        return out;
    }
    double log_ratio(const Eigen::VectorXd&, const Eigen::VectorXd&) const { return 0.0; }
};

/// Exchange algorithm for Gibbs random fields. Each iterate proposes theta',
/// forward-simulates pseudo-data y' at theta', and accepts with
///
///   alpha = min{1, exp[(theta'-theta)^T (s(y)-s(y'))]
///                  * p(theta')/p(theta) * h(theta|theta')/h(theta'|theta)}
///
/// in which the two partition functions have cancelled. After the update, K
/// forward simulations at the current theta feed the Type I score estimate.
/// All simulation seeds derive from (config.seed, iterate, replicate), so the
/// trace is reproducible for any worker count; replicate index K is reserved
/// for the exchange draw itself.
template <typename Model, typename Proposal = GaussianProposal>
ChainOutput exchange_chain(const Model& model, const Eigen::VectorXd& s_obs,
                           const Prior& prior, const ChainConfig& config,
                           const ScoreSimConfig& score, const Proposal& propose = {}) {
    config.validate();
    if (score.K < 1) throw std::invalid_argument("exchange_chain: need K >= 1");
    const Eigen::Index d = config.initial_theta.size();
    if (s_obs.size() != d) throw std::invalid_argument("exchange_chain: dimension mismatch");

    Eigen::VectorXd theta = config.initial_theta;
    double lp = prior.log_density(theta);
    if (!std::isfinite(lp))
        throw std::invalid_argument("exchange_chain: prior not finite at initial point");

    const std::int64_t kept = config.iterations / config.thinning;
    ChainOutput out;
    out.thetas.resize(kept, d);
    out.u_hats.resize(kept, d);
    out.aux_stats.resize(kept, d);
    out.accepted.reserve(static_cast<std::size_t>(kept));
    out.sim_failed.assign(static_cast<std::size_t>(kept), 0);
    out.meta.model_id = model.id();
    out.meta.K = score.K;
    out.meta.seed = config.seed;
    out.meta.workers = score.workers;

    Rng rng(config.seed);
    std::int64_t n_accept = 0;
    Eigen::Index row = 0;

    for (std::int64_t i = 0; i < config.iterations; ++i) {
        bool accept = false;
        bool failed = false;
        Eigen::VectorXd exch_stats;

        const Eigen::VectorXd theta_prop = propose.sample(rng, theta);
        const double lp_prop = prior.log_density(theta_prop);
        if (std::isfinite(lp_prop)) {
            try {
                exch_stats = model.suff_stat(model.forward_sim(
                    theta_prop, derive_seed(config.seed, static_cast<std::uint64_t>(i),
                                            static_cast<std::uint64_t>(score.K))));
            } catch (const SimulationFailure&) {
                failed = true;
            }
            if (!failed) {
                const double log_alpha = (theta_prop - theta).dot(s_obs - exch_stats) +
                                         lp_prop - lp + propose.log_ratio(theta, theta_prop);
                if (std::log(rng.uniform_pos()) < log_alpha) {
                    accept = true;
                    theta = theta_prop;
                    lp = lp_prop;
                    ++n_accept;
                }
            }
        }

        const bool reuse = score.count_exchange_draw && accept;
        const int fresh = reuse ? score.K - 1 : score.K;
        std::vector<Eigen::VectorXd> stats;
        stats.reserve(static_cast<std::size_t>(score.K));
        if (reuse) stats.push_back(exch_stats);
        if (fresh > 0) {
            auto sims = run_parallel<Eigen::VectorXd>(
                static_cast<std::size_t>(fresh), score.workers, [&](std::size_t k) {
                    return model.suff_stat(model.forward_sim(
                        theta, derive_seed(config.seed, static_cast<std::uint64_t>(i), k)));
                });
            for (auto& s : sims) stats.push_back(std::move(s));
        }
        const ScoreEstimate est =
            score_type1(s_obs, stats, prior.grad_log_density(theta), theta);

        if ((i + 1) % config.thinning == 0 && row < kept) {
            out.thetas.row(row) = theta;
            out.u_hats.row(row) = est.u_hat;
            Eigen::VectorXd mean_stat = Eigen::VectorXd::Zero(d);
            for (const auto& s : stats) mean_stat += s;
            out.aux_stats.row(row) = mean_stat / static_cast<double>(stats.size());
            out.accepted.push_back(accept ? 1 : 0);
            out.sim_failed[static_cast<std::size_t>(row)] = failed ? 1 : 0;
            ++row;
        }
    }
    out.acceptance_rate =
        static_cast<double>(n_accept) / static_cast<double>(config.iterations);
    return out;
}

}  // namespace rvcv::mcmc
