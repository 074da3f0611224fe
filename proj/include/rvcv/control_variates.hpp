#pragma once

#include <Eigen/Core>
#include <Eigen/Eigenvalues>

#include <limits>
#include <stdexcept>
#include <string>

#include "rvcv/errors.hpp"
#include "rvcv/stats.hpp"

namespace rvcv {

/// How the cross moment E[g m] is plugged into the coefficient formula.
/// `centered` uses the empirical covariance Cov[g, m]; `raw` uses the
/// uncentered mean of g*m. The two coincide in expectation because the basis
/// has zero posterior mean, but centering has smaller plug-in bias at finite
/// sample size and is the default.
enum class MomentMode { centered, raw };

/// Variance-reduction summary for one target function.
struct CvDiagnostics {
    double R = 1.0;        ///< var(uncontrolled) / var(controlled)
    double rho = 0.0;      ///< correlation of g with the fitted control variate
    bool infinite_R = false;  ///< controlled values were exactly constant
    std::string ess_note;
};

/// Coefficients phi_hat = -Vhat[m]^{-1} * cross(g, m) from I samples of the
/// target g and the basis vectors m (one sample per row of `m_samples`).
///
/// The variance matrix is factorised with a symmetric eigendecomposition and
/// the solve is refused (DegenerateDesignError) when the condition number
/// exceeds `condition_limit` or an eigenvalue is non-positive; a silent
/// answer from a near-singular design would be noise.
template <typename DerivedG, typename DerivedM>
Eigen::Matrix<typename DerivedG::Scalar, Eigen::Dynamic, 1> estimate_optimal_coeffs(
    const Eigen::MatrixBase<DerivedG>& g_samples,
    const Eigen::MatrixBase<DerivedM>& m_samples,
    MomentMode mode = MomentMode::centered, double condition_limit = 1e12) {
    using Scalar = typename DerivedG::Scalar;
    using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
    using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

    const Eigen::Index n = g_samples.size();
    const Eigen::Index p = m_samples.cols();
    if (m_samples.rows() != n)
        throw std::invalid_argument("estimate_optimal_coeffs: sample count mismatch");
    if (n < p + 2)
        throw std::invalid_argument(
            "estimate_optimal_coeffs: need at least coefficient count + 2 samples");

    const Scalar g_mean = g_samples.mean();
    const Vector m_mean = m_samples.colwise().mean();
    Matrix centered = m_samples.rowwise() - m_mean.transpose();
    Matrix variance = (centered.adjoint() * centered) / static_cast<Scalar>(n - 1);

    Vector cross(p);
    if (mode == MomentMode::centered) {
        cross = centered.adjoint() * (g_samples.array() - g_mean).matrix() /
                static_cast<Scalar>(n - 1);
    } else {
        cross = m_samples.adjoint() * g_samples / static_cast<Scalar>(n);
    }

    Eigen::SelfAdjointEigenSolver<Matrix> eig(variance);
    const Vector& lambda = eig.eigenvalues();
    const Scalar lmax = lambda[p - 1];
    const Scalar lmin = lambda[0];
    const double cond = (lmin > Scalar(0))
                            ? static_cast<double>(lmax / lmin)
                            : std::numeric_limits<double>::infinity();
    if (!(cond <= condition_limit))
        throw DegenerateDesignError(
            "estimate_optimal_coeffs: degenerate control-variate design "
            "(condition number " + std::to_string(cond) + ")",
            cond);

    return -(eig.eigenvectors() *
             (eig.eigenvectors().adjoint() * cross).cwiseQuotient(lambda));
}

/// Controlled sample values g_i + phi^T m_i; their mean is the RV estimate.
template <typename DerivedG, typename DerivedM, typename DerivedP>
Eigen::Matrix<typename DerivedG::Scalar, Eigen::Dynamic, 1> controlled_values(
    const Eigen::MatrixBase<DerivedG>& g_samples,
    const Eigen::MatrixBase<DerivedM>& m_samples,
    const Eigen::MatrixBase<DerivedP>& phi) {
    if (m_samples.rows() != g_samples.size() || m_samples.cols() != phi.size())
        throw std::invalid_argument("controlled_values: dimension mismatch");
    return g_samples + m_samples * phi;
}

/// R and rho from matched uncontrolled/controlled sample vectors. A constant
/// controlled vector is a perfect control variate: R is reported as +infinity
/// with the flag set rather than as an error.
template <typename DerivedG, typename DerivedC>
CvDiagnostics variance_reduction_factor(const Eigen::MatrixBase<DerivedG>& g_samples,
                                        const Eigen::MatrixBase<DerivedC>& controlled) {
    using Scalar = typename DerivedG::Scalar;
    if (g_samples.size() != controlled.size() || g_samples.size() < 2)
        throw std::invalid_argument("variance_reduction_factor: bad sample vectors");

    CvDiagnostics out;
    out.ess_note =
        "variances treat samples as independent; for MCMC output use "
        "batch-means/ESS-corrected standard errors";

    const Scalar var_g = sample_variance(g_samples);
    const Scalar var_c = sample_variance(controlled);
    if (var_c == Scalar(0)) {
        out.R = std::numeric_limits<double>::infinity();
        out.infinite_R = true;
    } else {
        out.R = static_cast<double>(var_g / var_c);
    }
    out.rho = static_cast<double>(
        sample_correlation(g_samples, (controlled - g_samples).eval()));
    return out;
}

}  // namespace rvcv
