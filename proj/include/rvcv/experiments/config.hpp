#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace rvcv::experiments {

/// Parsed experiment configuration ("key = value" file, '#' comments,
/// comma-separated lists). Unknown keys are rejected. See the README for the
/// full schema and one example per experiment.
struct ExperimentConfig {
    std::string experiment;  // exponential | ising | ergm | sir | rho-curve | k-allocation
    std::uint64_t seed = 1;
    std::string out_dir = "out";
    unsigned workers = 0;  // 0 = detected hardware parallelism

    std::vector<std::int64_t> I_grid;
    std::vector<int> K_grid;
    std::vector<int> degrees;
    int replicates = 20;
    int thinning = 1;
    bool raw_moments = false;
    bool split_half = false;
    bool count_exchange_draw = false;

    std::vector<double> proposal_sd;
    std::vector<double> initial_theta;

    // exponential / rho-curve
    double y = 2.0;

    // ising
    int rows = 16;
    int cols = 16;
    double theta_true = 0.4;
    double prior_sd = 5.0;
    std::string data_file;  // empty => self-generate
    int gen_burn_in = 20000;
    int sim_burn_in = 1000;
    int sim_lag = 500;
    double oracle_lo = -0.1;
    double oracle_hi = 0.9;
    int oracle_n = 501;

    // ergm
    int n_nodes = 16;
    double ergm_theta1_true = -1.0;
    double ergm_theta2_true = 0.1;

    // sir
    int n_obs = 10;
    double t_end = 20.0;
    int n_latent = 5;
    double population = 1000.0;
    double x0_s = 0.99;
    double x0_i = 0.01;
    int inner_sweeps = 50;
    int refresh_sweeps = 2;
    double prior_shape = 2.0;
    double prior_scale = 2.0;
    double sir_theta1_true = 0.5;
    double sir_theta2_true = 0.25;

    // k-allocation
    std::vector<int> K0_grid = {1, 2, 4, 8};
    double cost_budget = 1.0;
    double rho_inf = 0.0;  // 0 => fit from an internal exponential run
    double C = 0.0;
    int K_max_factor = 4;

    void validate() const;
};

ExperimentConfig parse_config(std::istream& in);
ExperimentConfig parse_config_file(const std::string& path);

}  // namespace rvcv::experiments
