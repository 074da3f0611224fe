#pragma once

#include <cstdint>

#include "rvcv/experiments/config.hpp"
#include "rvcv/experiments/report.hpp"
#include "rvcv/mcmc/chain.hpp"
#include "rvcv/sde/path.hpp"
#include "rvcv/sde/sir.hpp"

namespace rvcv::experiments {

/// Random-walk chain on the tractable exponential posterior with the Type I
/// score estimated from K parallel forward simulations at every retained
/// iterate.
mcmc::ChainOutput exponential_chain(double y, const mcmc::ChainConfig& config, int K,
                                    unsigned workers);

/// State and tuning for the SIR outer chain (Metropolis-within-Gibbs on
/// (theta, latent path), Type II score from K bridge imputations).
struct SirChainSetup {
    sde::SdePath observations;  // evenly spaced, all rows observed
    int n_latent = 5;
    int inner_sweeps = 50;
    int refresh_sweeps = 2;
    double population = 1000.0;
    mcmc::Prior prior;
};

mcmc::ChainOutput sir_chain(const SirChainSetup& setup, const mcmc::ChainConfig& config,
                            int K, unsigned workers);

/// Simulates SIR data on the inference mesh (so observation times align with
/// the latent discretisation) and returns the observation rows only.
sde::SdePath generate_sir_observations(const sde::SirParams& params,
                                       const Eigen::Vector2d& x0, double t_end, int n_obs,
                                       int n_latent, std::uint64_t seed);

/// Runs the configured experiment and returns the report; seeds for data
/// generation, replicates and per-iterate simulations all derive from
/// config.seed, so the report is reproducible for any worker count.
ExperimentReport run_experiment(const ExperimentConfig& config);

/// run_experiment plus output files (report.tsv, timings.tsv, summary.json
/// and any self-generated dataset) under config.out_dir.
ExperimentReport run_and_write(const ExperimentConfig& config);

}  // namespace rvcv::experiments
