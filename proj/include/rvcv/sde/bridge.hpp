#pragma once

#include <Eigen/Core>

#include <cstdint>

#include "rvcv/rng.hpp"
#include "rvcv/sde/path.hpp"
#include "rvcv/sde/sir.hpp"

namespace rvcv::sde {

/// One latent-path imputation together with per-gap Metropolis-Hastings
/// acceptance rates. `mixing_warning` is set when some gap accepted nothing
/// over the whole run.
struct BridgeDraw {
    SdePath path;
    Eigen::VectorXd acceptance;
    bool mixing_warning = false;
};

/// Expands evenly spaced observations into a full mesh with
/// `n_latent_per_gap` latent points per gap, latents initialised by linear
/// interpolation (always inside the model domain between valid endpoints).
SdePath init_bridge_path(const SdePath& observations, int n_latent_per_gap);

/// In-place Metropolis-Hastings refresh of all latent points: per gap, whole
/// sub-paths are proposed from the modified diffusion bridge (drift towards
/// the fixed right endpoint, variance shrinking with remaining time) and
/// accepted against the Euler-Maruyama target. Observation entries never
/// move. Accepted proposal counts are accumulated per gap into
/// `accept_counts`; returns the number of proposals made per gap.
int bridge_refresh(SdePath& path, const SirParams& params, int sweeps, Rng& rng,
                   Eigen::VectorXi& accept_counts);

/// One draw of the latent sub-paths conditional on the observations: linear
/// initialisation followed by `sweeps` refresh sweeps. With
/// n_latent_per_gap = 0 the observations are returned unchanged and the
/// acceptance is trivially one.
BridgeDraw bridge_sample_latent(const SirParams& params, const SdePath& observations,
                                int n_latent_per_gap, int sweeps, std::uint64_t seed);

}  // namespace rvcv::sde
