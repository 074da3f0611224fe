#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace rvcv::mcmc {

/// Sampler settings shared by all outer chains.
struct ChainConfig {
    std::int64_t iterations = 0;
    Eigen::VectorXd proposal_sd;
    Eigen::VectorXd initial_theta;
    std::uint64_t seed = 1;
    int thinning = 1;

    void validate() const {
        if (iterations < 1) throw std::invalid_argument("ChainConfig: iterations must be >= 1");
        if (thinning < 1) throw std::invalid_argument("ChainConfig: thinning must be >= 1");
        if (proposal_sd.size() != initial_theta.size() || proposal_sd.size() == 0)
            throw std::invalid_argument("ChainConfig: proposal/initial dimension mismatch");
        if ((proposal_sd.array() <= 0.0).any())
            throw std::invalid_argument("ChainConfig: proposal_sd must be positive");
    }
};

struct ChainMetadata {
    std::string model_id;
    int K = 0;
    std::uint64_t seed = 0;
    unsigned workers = 1;
};

/// Recorded trace: one row per retained iterate. `u_hats` and `aux_stats`
/// are empty for chains that do not estimate scores.
struct ChainOutput {
    Eigen::MatrixXd thetas;
    Eigen::MatrixXd u_hats;
    Eigen::MatrixXd aux_stats;
    std::vector<std::uint8_t> accepted;
    std::vector<std::uint8_t> sim_failed;
    double acceptance_rate = 0.0;
    ChainMetadata meta;
};

/// Target prior as log density plus gradient.
struct Prior {
    std::function<double(const Eigen::VectorXd&)> log_density;
    std::function<Eigen::VectorXd(const Eigen::VectorXd&)> grad_log_density;
};

/// N(0, sd^2) independent components.
Prior gaussian_prior(double sd);

/// Improper flat prior on the positive orthant.
Prior flat_positive_prior();

/// Independent Gamma(shape, scale) components (support on the positive
/// orthant).
Prior gamma_prior(double shape, double scale);

/// One row per iterate: iteration index, theta components, u_hat components,
/// accept flag. Tab separated with a header.
void write_trace(std::ostream& out, const ChainOutput& chain);
void write_trace_file(const std::string& path, const ChainOutput& chain);

}  // namespace rvcv::mcmc
