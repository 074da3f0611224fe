#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <optional>

#include "rvcv/sde/path.hpp"
#include "rvcv/sde/sir.hpp"

namespace rvcv::sde {

namespace detail {

/// Regularised 2x2 diffusion block shared by the likelihood, the score and
/// the bridge proposals. Jitter eps*(tr/2)*I is added when the smallest
/// eigenvalue drops below 1e-12*tr; `zero` marks an exactly vanishing matrix
/// (no dynamics), and an indefinite matrix (invalid state) yields nullopt.
struct RegularisedBeta {
    Eigen::Matrix2d beta;
    Eigen::Matrix2d inverse;
    double log_det = 0.0;
    bool zero = false;
};

std::optional<RegularisedBeta> regularise_beta(const Eigen::Matrix2d& beta);

double gauss2_log_pdf(const Eigen::Vector2d& residual, const RegularisedBeta& cov);

}  // namespace detail

/// Euler-Maruyama log likelihood of a full path: the sum over transitions of
/// Gaussian log densities with mean X_{i-1} + alpha_i dt and covariance
/// beta_i dt, including the theta-dependent normalisation. Returns -infinity
/// for states outside the model domain (indefinite diffusion), and throws
/// SdeDegeneracyError when a transition's diffusion is singular after
/// regularisation yet the increment is nonzero. A transition with exactly
/// zero diffusion and zero increment contributes nothing (frozen dynamics).
double em_log_likelihood(const SdePath& path, const SirParams& params);

/// Analytic gradient of em_log_likelihood with respect to (theta1, theta2),
/// using the closed-form SIR derivatives of drift and diffusion. Transitions
/// with frozen dynamics contribute zero to both components.
Eigen::Vector2d sde_path_score(const SdePath& path, const SirParams& params);

/// Forward Euler-Maruyama simulation from x0 over [0, t_end] with mesh dt.
/// Proportions are truncated at zero (extinction is absorbing); non-finite
/// states raise SimulationFailure. Deterministic given the seed.
SdePath simulate_sir(const SirParams& params, const Eigen::Vector2d& x0, double t_end,
                     double dt, std::uint64_t seed);

}  // namespace rvcv::sde
