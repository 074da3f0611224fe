#pragma once

#include <Eigen/Core>

#include <cmath>
#include <cstddef>
#include <stdexcept>

namespace rvcv {

/// Unbiased sample variance (denominator n-1).
template <typename Derived>
typename Derived::Scalar sample_variance(const Eigen::MatrixBase<Derived>& x) {
    using Scalar = typename Derived::Scalar;
    const auto n = x.size();
    if (n < 2) throw std::invalid_argument("sample_variance: need at least 2 samples");
    const Scalar m = x.mean();
    return (x.array() - m).square().sum() / static_cast<Scalar>(n - 1);
}

/// Unbiased sample covariance between two equally sized vectors.
template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar sample_covariance(const Eigen::MatrixBase<DerivedA>& x,
                                            const Eigen::MatrixBase<DerivedB>& y) {
    using Scalar = typename DerivedA::Scalar;
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("sample_covariance: size mismatch or too few samples");
    const Scalar mx = x.mean();
    const Scalar my = y.mean();
    return ((x.array() - mx) * (y.array() - my)).sum() /
           static_cast<Scalar>(x.size() - 1);
}

/// Pearson correlation; returns 0 when either input is constant.
template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar sample_correlation(const Eigen::MatrixBase<DerivedA>& x,
                                             const Eigen::MatrixBase<DerivedB>& y) {
    using Scalar = typename DerivedA::Scalar;
    const Scalar vx = sample_variance(x);
    const Scalar vy = sample_variance(y);
    if (vx <= Scalar(0) || vy <= Scalar(0)) return Scalar(0);
    return sample_covariance(x, y) / std::sqrt(vx * vy);
}

/// Covariance matrix of the rows of M (samples in rows), denominator n-1.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>
sample_covariance_matrix(const Eigen::MatrixBase<Derived>& m) {
    using Scalar = typename Derived::Scalar;
    const auto n = m.rows();
    if (n < 2) throw std::invalid_argument("sample_covariance_matrix: need at least 2 rows");
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> centered =
        m.rowwise() - m.colwise().mean();
    return (centered.adjoint() * centered) / static_cast<Scalar>(n - 1);
}

/// Standard error of the mean of a (possibly autocorrelated) series, by the
/// method of non-overlapping batch means with ~sqrt(n) batches.
template <typename Derived>
typename Derived::Scalar batch_means_se(const Eigen::MatrixBase<Derived>& x) {
    using Scalar = typename Derived::Scalar;
    const std::ptrdiff_t n = x.size();
    if (n < 4) throw std::invalid_argument("batch_means_se: need at least 4 samples");
    const std::ptrdiff_t batch = static_cast<std::ptrdiff_t>(std::sqrt(static_cast<double>(n)));
    const std::ptrdiff_t nbatch = n / batch;
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> means(nbatch);
    for (std::ptrdiff_t b = 0; b < nbatch; ++b)
        means[b] = x.segment(b * batch, batch).mean();
    return std::sqrt(sample_variance(means) / static_cast<Scalar>(nbatch));
}

/// Naive standard error of the mean (assumes independent samples).
template <typename Derived>
typename Derived::Scalar iid_se(const Eigen::MatrixBase<Derived>& x) {
    using Scalar = typename Derived::Scalar;
    return std::sqrt(sample_variance(x) / static_cast<Scalar>(x.size()));
}

}  // namespace rvcv
