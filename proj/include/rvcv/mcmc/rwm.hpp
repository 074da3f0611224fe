#pragma once

#include <cmath>
#include <utility>

#include "rvcv/mcmc/chain.hpp"
#include "rvcv/rng.hpp"

namespace rvcv::mcmc {

namespace detail {

struct NoScore {};

}  // namespace detail

/// Gaussian random-walk Metropolis on an arbitrary log target, with an
/// optional per-iterate score hook. The hook is called with (iterate index,
/// current theta) after the accept/reject step and returns the score estimate
/// recorded for that iterate; it must not consume the chain's own generator,
/// so runs are reproducible whatever the hook does internally.
template <typename LogTarget, typename ScoreHook>
ChainOutput rwm_score_chain(LogTarget&& log_target, ScoreHook&& score_hook,
                            const ChainConfig& config) {
    config.validate();
    const Eigen::Index d = config.initial_theta.size();
    constexpr bool with_score = !std::is_same_v<std::decay_t<ScoreHook>, detail::NoScore>;

    Eigen::VectorXd theta = config.initial_theta;
    double lt = log_target(theta);
    if (!std::isfinite(lt))
        throw std::invalid_argument("rwm_chain: log target not finite at initial point");

    const std::int64_t kept = config.iterations / config.thinning;
    ChainOutput out;
    out.thetas.resize(kept, d);
    if constexpr (with_score) out.u_hats.resize(kept, d);
    out.accepted.reserve(static_cast<std::size_t>(kept));
    out.sim_failed.assign(static_cast<std::size_t>(kept), 0);
    out.meta.seed = config.seed;

    Rng rng(config.seed);
    std::int64_t n_accept = 0;
    Eigen::Index row = 0;
    Eigen::VectorXd proposal(d);
    for (std::int64_t i = 0; i < config.iterations; ++i) {
        for (Eigen::Index j = 0; j < d; ++j)
            proposal[j] = theta[j] + config.proposal_sd[j] * rng.normal();
        const double lt_prop = log_target(proposal);
        bool accept = false;
        if (lt_prop > -std::numeric_limits<double>::infinity()) {
            accept = std::log(rng.uniform_pos()) < lt_prop - lt;
        }
        if (accept) {
            theta = proposal;
            lt = lt_prop;
            ++n_accept;
        }
        if ((i + 1) % config.thinning == 0 && row < kept) {
            out.thetas.row(row) = theta;
            if constexpr (with_score) out.u_hats.row(row) = score_hook(i, theta);
            out.accepted.push_back(accept ? 1 : 0);
            ++row;
        }
    }
    out.acceptance_rate =
        static_cast<double>(n_accept) / static_cast<double>(config.iterations);
    return out;
}

/// Plain random-walk Metropolis (no score estimation).
template <typename LogTarget>
ChainOutput rwm_chain(LogTarget&& log_target, const ChainConfig& config) {
    return rwm_score_chain(std::forward<LogTarget>(log_target), detail::NoScore{}, config);
}

}  // namespace rvcv::mcmc
