#include "rvcv/sde/bridge.hpp"

#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "rvcv/sde/euler.hpp"

namespace rvcv::sde {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

struct Gap {
    Eigen::Index first;  // index of the left observation
    Eigen::Index last;   // index of the right observation
};

std::vector<Gap> find_gaps(const SdePath& path) {
    std::vector<Eigen::Index> obs;
    for (Eigen::Index i = 0; i < path.size(); ++i)
        if (path.observed[static_cast<std::size_t>(i)]) obs.push_back(i);
    if (obs.size() < 2 || obs.front() != 0 || obs.back() != path.size() - 1)
        throw std::invalid_argument("bridge: first and last mesh points must be observed");
    std::vector<Gap> gaps;
    for (std::size_t g = 0; g + 1 < obs.size(); ++g) gaps.push_back({obs[g], obs[g + 1]});
    return gaps;
}

/// Euler-Maruyama log density of the transitions inside one gap.
double gap_log_target(const SdePath& path, const SirParams& params, const Gap& gap) {
    const double dt = path.dt();
    double ll = 0.0;
    for (Eigen::Index i = gap.first + 1; i <= gap.last; ++i) {
        const Eigen::Vector2d x_prev = path.states.row(i - 1);
        const Eigen::Vector2d residual =
            Eigen::Vector2d(path.states.row(i)) - x_prev - sir_drift(x_prev, params) * dt;
        auto reg = detail::regularise_beta(sir_diffusion(x_prev, params));
        if (!reg) return kNegInf;
        if (reg->zero) {
            if (residual.isZero(0.0)) continue;
            return kNegInf;
        }
        ll += -std::log(2.0 * std::numbers::pi * dt) - 0.5 * reg->log_det -
              residual.dot(reg->inverse * residual) / (2.0 * dt);
    }
    return ll;
}

struct GapProposal {
    Eigen::Matrix<double, Eigen::Dynamic, 2> latents;
    double log_q = 0.0;
};

/// Sequential modified-diffusion-bridge pass over one gap. With `draw` the
/// latents are sampled and their proposal density accumulated; without, the
/// density of the latents already in `path` is evaluated (independence
/// proposal, so this is needed for the reverse ratio). Returns nullopt when
/// the proposal covariance degenerates (counts as a rejection).
std::optional<GapProposal> mdb_pass(const SdePath& path, const SirParams& params,
                                    const Gap& gap, bool draw, Rng* rng) {
    const double dt = path.dt();
    const double t_end = path.times[gap.last];
    const Eigen::Vector2d x_end = path.states.row(gap.last);
    const Eigen::Index n_latent = gap.last - gap.first - 1;

    GapProposal out;
    out.latents.resize(n_latent, 2);

    Eigen::Vector2d x_prev = path.states.row(gap.first);
    for (Eigen::Index j = 0; j < n_latent; ++j) {
        const Eigen::Index i = gap.first + 1 + j;
        const double remaining = t_end - path.times[i - 1];
        const Eigen::Vector2d mean = x_prev + (x_end - x_prev) / remaining * dt;
        const double shrink = (t_end - path.times[i]) / remaining;

        auto reg = detail::regularise_beta(sir_diffusion(x_prev, params));
        if (!reg || reg->zero) return std::nullopt;
        detail::RegularisedBeta cov = *reg;
        cov.beta *= shrink * dt;
        cov.inverse /= shrink * dt;
        cov.log_det += 2.0 * std::log(shrink * dt);

        Eigen::Vector2d x_i;
        if (draw) {
            const double a = cov.beta(0, 0);
            Eigen::Matrix2d chol = Eigen::Matrix2d::Zero();
            if (a > 0.0) {
                chol(0, 0) = std::sqrt(a);
                chol(1, 0) = cov.beta(1, 0) / chol(0, 0);
                chol(1, 1) = std::sqrt(std::max(0.0, cov.beta(1, 1) - chol(1, 0) * chol(1, 0)));
            } else {
                chol(1, 1) = std::sqrt(std::max(0.0, cov.beta(1, 1)));
            }
            x_i = mean + chol * Eigen::Vector2d(rng->normal(), rng->normal());
            out.latents.row(j) = x_i;
        } else {
            x_i = path.states.row(i);
            out.latents.row(j) = x_i;
        }
        out.log_q += detail::gauss2_log_pdf(x_i - mean, cov);
        x_prev = x_i;
    }
    return out;
}

}  // namespace

SdePath init_bridge_path(const SdePath& observations, int n_latent_per_gap) {
    observations.validate();
    if (n_latent_per_gap < 0)
        throw std::invalid_argument("init_bridge_path: n_latent_per_gap must be >= 0");
    const Eigen::Index n_obs = observations.size();
    if (n_latent_per_gap == 0) return observations;

    const int step = n_latent_per_gap + 1;
    const Eigen::Index total = (n_obs - 1) * step + 1;

    SdePath path;
    path.times = Eigen::VectorXd::LinSpaced(total, observations.times[0],
                                            observations.times[n_obs - 1]);
    path.states.resize(total, 2);
    path.observed.assign(static_cast<std::size_t>(total), 0);
    for (Eigen::Index g = 0; g + 1 < n_obs; ++g) {
        const Eigen::Index base = g * step;
        path.observed[static_cast<std::size_t>(base)] = 1;
        const Eigen::Vector2d a = observations.states.row(g);
        const Eigen::Vector2d b = observations.states.row(g + 1);
        path.states.row(base) = a;
        for (int j = 1; j < step; ++j)
            path.states.row(base + j) =
                a + (b - a) * (static_cast<double>(j) / static_cast<double>(step));
    }
    path.states.row(total - 1) = observations.states.row(n_obs - 1);
    path.observed[static_cast<std::size_t>(total - 1)] = 1;
    path.validate();
    return path;
}

int bridge_refresh(SdePath& path, const SirParams& params, int sweeps, Rng& rng,
                   Eigen::VectorXi& accept_counts) {
    const auto gaps = find_gaps(path);
    if (accept_counts.size() != static_cast<Eigen::Index>(gaps.size()))
        accept_counts = Eigen::VectorXi::Zero(static_cast<Eigen::Index>(gaps.size()));

    for (int sweep = 0; sweep < sweeps; ++sweep) {
        for (std::size_t g = 0; g < gaps.size(); ++g) {
            const Gap& gap = gaps[g];
            if (gap.last - gap.first < 2) {  // nothing latent in this gap
                ++accept_counts[static_cast<Eigen::Index>(g)];
                continue;
            }
            auto proposal = mdb_pass(path, params, gap, true, &rng);
            if (!proposal) continue;

            auto current_q = mdb_pass(path, params, gap, false, nullptr);
            if (!current_q) continue;

            const double target_cur = gap_log_target(path, params, gap);
            Eigen::Matrix<double, Eigen::Dynamic, 2> saved =
                path.states.block(gap.first + 1, 0, gap.last - gap.first - 1, 2);
            path.states.block(gap.first + 1, 0, gap.last - gap.first - 1, 2) =
                proposal->latents;
            const double target_prop = gap_log_target(path, params, gap);

            const double log_alpha =
                (target_prop - proposal->log_q) - (target_cur - current_q->log_q);
            if (std::log(rng.uniform_pos()) < log_alpha) {
                ++accept_counts[static_cast<Eigen::Index>(g)];
            } else {
                path.states.block(gap.first + 1, 0, gap.last - gap.first - 1, 2) = saved;
            }
        }
    }
    return sweeps;
}

BridgeDraw bridge_sample_latent(const SirParams& params, const SdePath& observations,
                                int n_latent_per_gap, int sweeps, std::uint64_t seed) {
    BridgeDraw draw;
    draw.path = init_bridge_path(observations, n_latent_per_gap);
    const Eigen::Index n_gaps = observations.size() - 1;
    draw.acceptance = Eigen::VectorXd::Ones(n_gaps);
    if (n_latent_per_gap == 0 || sweeps <= 0) return draw;

    Rng rng(seed);
    Eigen::VectorXi counts = Eigen::VectorXi::Zero(n_gaps);
    bridge_refresh(draw.path, params, sweeps, rng, counts);
    draw.acceptance = counts.cast<double>() / static_cast<double>(sweeps);
    draw.mixing_warning = (counts.array() == 0).any();
    return draw;
}

}  // namespace rvcv::sde
