#pragma once

#include <Eigen/Core>

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace rvcv {

/// Parameters of the saturation law rho(K)^2 = (1/rho_inf^2 + C/K)^{-1},
/// fitted on the linearised scale 1/rho^2 = 1/rho_inf^2 + C/K.
struct RhoCurveFit {
    double rho_inf = 1.0;   ///< limiting correlation, in (0, 1]
    double C = 0.0;         ///< score-noise constant, > 0
    double residual = 0.0;  ///< RMS error of the linearised fit

    double rho_squared_at(double K) const {
        return 1.0 / (1.0 / (rho_inf * rho_inf) + C / K);
    }
};

/// Least-squares fit of (rho_inf, C) from measured correlations at several
/// simulation counts K. rho_inf is clamped to (0, 1]; when the unconstrained
/// intercept falls below 1 (i.e. rho_inf > 1, which sampling noise can
/// produce), the intercept is pinned at 1 and the slope refitted.
template <typename DerivedK, typename DerivedR>
RhoCurveFit fit_rho_curve(const Eigen::MatrixBase<DerivedK>& k_values,
                          const Eigen::MatrixBase<DerivedR>& rho_values) {
    const Eigen::Index n = k_values.size();
    if (rho_values.size() != n || n < 2)
        throw std::invalid_argument("fit_rho_curve: need matched vectors, length >= 2");
    for (Eigen::Index i = 0; i < n; ++i) {
        if (!(k_values[i] >= 1))
            throw std::invalid_argument("fit_rho_curve: K values must be positive");
        if (!(rho_values[i] > 0.0 && rho_values[i] < 1.0))
            throw std::invalid_argument("fit_rho_curve: rho values must lie in (0,1)");
    }

    Eigen::VectorXd x(n), z(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        x[i] = 1.0 / static_cast<double>(k_values[i]);
        z[i] = 1.0 / (rho_values[i] * rho_values[i]);
    }
    const double x_mean = x.mean();
    const double sxx = (x.array() - x_mean).square().sum();
    if (sxx == 0.0)
        throw std::invalid_argument("fit_rho_curve: need at least 2 distinct K values");

    const double z_mean = z.mean();
    double slope = ((x.array() - x_mean) * (z.array() - z_mean)).sum() / sxx;
    double intercept = z_mean - slope * x_mean;
    if (intercept < 1.0) {
        intercept = 1.0;
        slope = (x.array() * (z.array() - 1.0)).sum() / x.array().square().sum();
    }
    if (slope <= 0.0) slope = 1e-12;

    RhoCurveFit fit;
    fit.rho_inf = 1.0 / std::sqrt(intercept);
    fit.C = slope;
    fit.residual = std::sqrt(
        (z.array() - (intercept + slope * x.array())).square().mean());
    return fit;
}

/// Cost-normalised variance ratio
///   r(K) = (1/c) * ceil(K/K0) * (1 - K rho_inf^2 / (K + C rho_inf^2))
/// for budget c on a K0-core architecture. Minimised over K at K = K0.
inline double cost_normalized_ratio(std::int64_t K, std::int64_t K0, double c,
                                    double rho_inf, double C) {
    if (K < 1 || K0 < 1 || !(c > 0.0) || !(C > 0.0))
        throw std::invalid_argument("cost_normalized_ratio: inputs must be positive");
    if (!(rho_inf > 0.0 && rho_inf <= 1.0))
        throw std::invalid_argument("cost_normalized_ratio: rho_inf must lie in (0,1]");
    const double rounds = static_cast<double>((K + K0 - 1) / K0);
    const double k = static_cast<double>(K);
    const double r2 = rho_inf * rho_inf;
    return rounds / c * (1.0 - k * r2 / (k + C * r2));
}

/// Enumerates r(K) for K = 1..K_max and returns the minimiser, ties broken
/// to the smallest K.
inline std::int64_t argmin_cost_normalized_ratio(std::int64_t K_max, std::int64_t K0,
                                                 double c, double rho_inf, double C) {
    if (K_max < 1) throw std::invalid_argument("argmin_cost_normalized_ratio: K_max >= 1");
    std::int64_t best_k = 1;
    double best_r = cost_normalized_ratio(1, K0, c, rho_inf, C);
    for (std::int64_t k = 2; k <= K_max; ++k) {
        const double r = cost_normalized_ratio(k, K0, c, rho_inf, C);
        if (r < best_r) {
            best_r = r;
            best_k = k;
        }
    }
    return best_k;
}

}  // namespace rvcv
