#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <stdexcept>

namespace rvcv {

/// Shape of the polynomial trial function P(theta): parameter dimension d and
/// total degree in {1, 2, 3}. Coefficients are stored once per distinct
/// monomial under the symmetry convention, in canonical order
///
///   a_1 .. a_d,
///   b_{ij} for i <= j (lexicographic),
///   c_{ijk} for i <= j <= k (lexicographic).
///
/// Degrees one and two are the workhorses; degree three is supported but
/// estimates extra coefficients that are zero in the Gaussian-like cases, so
/// it tends to add noise rather than precision.
struct PolynomialSpec {
    int dimension;
    int degree;

    PolynomialSpec(int dim, int deg) : dimension(dim), degree(deg) {
        if (dim < 1) throw std::invalid_argument("PolynomialSpec: dimension must be >= 1");
        if (deg < 1 || deg > 3)
            throw std::invalid_argument("PolynomialSpec: degree must be in {1,2,3}");
    }
};

/// Number of distinct monomial coefficients: d, plus d(d+1)/2 at degree two,
/// plus (d+2 choose 3) at degree three.
inline std::size_t coefficient_count(const PolynomialSpec& spec) {
    const std::size_t d = static_cast<std::size_t>(spec.dimension);
    std::size_t n = d;
    if (spec.degree >= 2) n += d * (d + 1) / 2;
    if (spec.degree >= 3) n += d * (d + 1) * (d + 2) / 6;
    return n;
}

/// Control-variate basis vector m(theta, u_hat), defined so that
/// phi^T m(theta, u_hat) equals Laplacian[P](theta) + grad[P](theta).u_hat
/// for the polynomial P with coefficient vector phi. Component per distinct
/// coefficient, in canonical order:
///
///   a_i            ->  u_i
///   b_{ii}         ->  2 + 2 theta_i u_i
///   b_{ij}, i<j    ->  2 theta_j u_i + 2 theta_i u_j
///   c_{iii}        ->  6 theta_i + 3 theta_i^2 u_i
///   c_{iij}, i<j   ->  6 theta_j + 6 theta_i theta_j u_i + 3 theta_i^2 u_j
///   c_{ijj}, i<j   ->  6 theta_i + 3 theta_j^2 u_i + 6 theta_i theta_j u_j
///   c_{ijk}, i<j<k ->  6 (theta_j theta_k u_i + theta_i theta_k u_j
///                         + theta_i theta_j u_k)
///
/// Each factor is the derivative of mu * theta_p theta_q theta_r where mu is
/// the number of distinct index permutations, i.e. the multiplicity of the
/// coefficient in the fully symmetric tensor. At degree one the map is the
/// identity on u_hat.
template <typename DerivedT, typename DerivedU>
Eigen::Matrix<typename DerivedT::Scalar, Eigen::Dynamic, 1> monomial_map(
    const Eigen::MatrixBase<DerivedT>& theta, const Eigen::MatrixBase<DerivedU>& u_hat,
    const PolynomialSpec& spec) {
    using Scalar = typename DerivedT::Scalar;
    const int d = spec.dimension;
    if (theta.size() != d || u_hat.size() != d)
        throw std::invalid_argument("monomial_map: theta/u_hat dimension mismatch");
    if (!theta.allFinite() || !u_hat.allFinite())
        throw std::invalid_argument("monomial_map: non-finite input");

    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> m(coefficient_count(spec));
    Eigen::Index pos = 0;

    for (int i = 0; i < d; ++i) m[pos++] = u_hat[i];

    if (spec.degree >= 2) {
        for (int i = 0; i < d; ++i) {
            for (int j = i; j < d; ++j) {
                if (i == j)
                    m[pos++] = Scalar(2) + Scalar(2) * theta[i] * u_hat[i];
                else
                    m[pos++] = Scalar(2) * (theta[j] * u_hat[i] + theta[i] * u_hat[j]);
            }
        }
    }

    if (spec.degree >= 3) {
        for (int i = 0; i < d; ++i) {
            for (int j = i; j < d; ++j) {
                for (int k = j; k < d; ++k) {
                    Scalar v;
                    if (i == j && j == k) {
                        v = Scalar(6) * theta[i] + Scalar(3) * theta[i] * theta[i] * u_hat[i];
                    } else if (i == j) {  // c_{iik}, i < k
                        v = Scalar(6) * theta[k] +
                            Scalar(6) * theta[i] * theta[k] * u_hat[i] +
                            Scalar(3) * theta[i] * theta[i] * u_hat[k];
                    } else if (j == k) {  // c_{ijj}, i < j
                        v = Scalar(6) * theta[i] +
                            Scalar(3) * theta[j] * theta[j] * u_hat[i] +
                            Scalar(6) * theta[i] * theta[j] * u_hat[j];
                    } else {  // all distinct
                        v = Scalar(6) * (theta[j] * theta[k] * u_hat[i] +
                                         theta[i] * theta[k] * u_hat[j] +
                                         theta[i] * theta[j] * u_hat[k]);
                    }
                    m[pos++] = v;
                }
            }
        }
    }
    return m;
}

}  // namespace rvcv
