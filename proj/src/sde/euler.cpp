#include "rvcv/sde/euler.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "rvcv/errors.hpp"
#include "rvcv/rng.hpp"

namespace rvcv::sde {

namespace detail {

std::optional<RegularisedBeta> regularise_beta(const Eigen::Matrix2d& beta_in) {
    RegularisedBeta out;
    out.beta = beta_in;
    const double tr = out.beta(0, 0) + out.beta(1, 1);

    if (tr == 0.0 && out.beta(0, 1) == 0.0) {
        out.zero = true;
        return out;
    }

    double det = out.beta(0, 0) * out.beta(1, 1) - out.beta(0, 1) * out.beta(1, 0);
    const double disc = std::sqrt(std::max(0.0, tr * tr - 4.0 * det));
    const double lambda_min = 0.5 * (tr - disc);
    const double scale = std::abs(tr);

    if (lambda_min < -1e-9 * scale || tr < 0.0) return std::nullopt;  // indefinite

    if (lambda_min < 1e-12 * scale) {
        const double jitter = 1e-8 * (tr / 2.0);
        out.beta(0, 0) += jitter;
        out.beta(1, 1) += jitter;
        det = out.beta(0, 0) * out.beta(1, 1) - out.beta(0, 1) * out.beta(1, 0);
    }
    if (!(det > 0.0)) return std::nullopt;  // still singular

    out.log_det = std::log(det);
    out.inverse << out.beta(1, 1), -out.beta(0, 1), -out.beta(1, 0), out.beta(0, 0);
    out.inverse /= det;
    return out;
}

double gauss2_log_pdf(const Eigen::Vector2d& residual, const RegularisedBeta& cov) {
    return -std::log(2.0 * std::numbers::pi) - 0.5 * cov.log_det -
           0.5 * residual.dot(cov.inverse * residual);
}

}  // namespace detail

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

}  // namespace

double em_log_likelihood(const SdePath& path, const SirParams& params) {
    path.validate();
    const double dt = path.dt();
    double ll = 0.0;
    for (Eigen::Index i = 1; i < path.size(); ++i) {
        const Eigen::Vector2d x_prev = path.states.row(i - 1);
        const Eigen::Vector2d x_cur = path.states.row(i);
        const Eigen::Vector2d residual = x_cur - x_prev - sir_drift(x_prev, params) * dt;

        auto reg = detail::regularise_beta(sir_diffusion(x_prev, params));
        if (!reg) return kNegInf;
        if (reg->zero) {
            if (residual.isZero(0.0)) continue;
            throw SdeDegeneracyError(
                "em_log_likelihood: singular diffusion with nonzero increment at step " +
                    std::to_string(i),
                static_cast<std::size_t>(i));
        }
        // Covariance is beta*dt: fold dt into the normalisation and quadratic form.
        ll += -std::log(2.0 * std::numbers::pi * dt) - 0.5 * reg->log_det -
              residual.dot(reg->inverse * residual) / (2.0 * dt);
    }
    return ll;
}

Eigen::Vector2d sde_path_score(const SdePath& path, const SirParams& params) {
    path.validate();
    const double dt = path.dt();
    Eigen::Vector2d score = Eigen::Vector2d::Zero();
    for (Eigen::Index i = 1; i < path.size(); ++i) {
        const Eigen::Vector2d x_prev = path.states.row(i - 1);
        const Eigen::Vector2d x_cur = path.states.row(i);
        const Eigen::Vector2d residual = x_cur - x_prev - sir_drift(x_prev, params) * dt;

        auto reg = detail::regularise_beta(sir_diffusion(x_prev, params));
        if (!reg || (reg->zero && !residual.isZero(0.0)))
            throw SdeDegeneracyError(
                "sde_path_score: degenerate diffusion at step " + std::to_string(i),
                static_cast<std::size_t>(i));
        if (reg->zero) continue;

        const auto [da1, da2] = sir_drift_grad(x_prev);
        const auto [db1, db2] = sir_diffusion_grad(x_prev, params);
        const Eigen::Vector2d w = reg->inverse * residual;

        auto component = [&](const Eigen::Vector2d& da, const Eigen::Matrix2d& db) {
            return -0.5 * (reg->inverse * db).trace() + da.dot(w) +
                   w.dot(db * w) / (2.0 * dt);
        };
        score[0] += component(da1, db1);
        score[1] += component(da2, db2);
    }
    return score;
}

SdePath simulate_sir(const SirParams& params, const Eigen::Vector2d& x0, double t_end,
                     double dt, std::uint64_t seed) {
    if (!(dt > 0.0)) throw std::invalid_argument("simulate_sir: dt must be positive");
    if (!(t_end > 0.0)) throw std::invalid_argument("simulate_sir: t_end must be positive");

    const auto steps = static_cast<Eigen::Index>(std::llround(t_end / dt));
    SdePath path;
    path.times = Eigen::VectorXd::LinSpaced(steps + 1, 0.0, static_cast<double>(steps) * dt);
    path.states.resize(steps + 1, 2);
    path.observed.assign(static_cast<std::size_t>(steps + 1), 1);

    Rng rng(seed);
    Eigen::Vector2d x = x0;
    path.states.row(0) = x;
    const double sqrt_dt = std::sqrt(dt);
    for (Eigen::Index i = 1; i <= steps; ++i) {
        const Eigen::Matrix2d beta = sir_diffusion(x, params);
        // Analytic lower Cholesky factor; the first column vanishes with the
        // infection term.
        const double a = beta(0, 0);
        Eigen::Matrix2d chol = Eigen::Matrix2d::Zero();
        if (a > 0.0) {
            chol(0, 0) = std::sqrt(a);
            chol(1, 0) = beta(1, 0) / chol(0, 0);
            chol(1, 1) = std::sqrt(std::max(0.0, beta(1, 1) - chol(1, 0) * chol(1, 0)));
        } else {
            chol(1, 1) = std::sqrt(std::max(0.0, beta(1, 1)));
        }
        const Eigen::Vector2d z(rng.normal(), rng.normal());
        x += sir_drift(x, params) * dt + sqrt_dt * (chol * z);
        x = x.cwiseMax(0.0);
        if (!x.allFinite())
            throw SimulationFailure("simulate_sir: non-finite state at step " +
                                    std::to_string(i));
        path.states.row(i) = x;
    }
    return path;
}

}  // namespace rvcv::sde
