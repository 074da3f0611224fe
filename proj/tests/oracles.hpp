#pragma once

// Independent test oracles: everything here recomputes expected values by a
// route that does not share code with the implementation under test.

#include <Eigen/Core>

#include <cmath>
#include <functional>
#include <vector>

#include "rvcv/polynomial.hpp"

namespace oracles {

/// Evaluates the trial polynomial P(theta) for a coefficient vector in the
/// canonical ordering, expanding each distinct coefficient with its
/// permutation multiplicity (1 for a_i; 1 / 2 for b_ii / b_ij; 1 / 3 / 6 for
/// c_iii / c_iij, c_ijj / c_ijk).
inline double eval_polynomial(const Eigen::VectorXd& theta, const Eigen::VectorXd& phi,
                              const rvcv::PolynomialSpec& spec) {
    const int d = spec.dimension;
    Eigen::Index pos = 0;
    double value = 0.0;
    for (int i = 0; i < d; ++i) value += phi[pos++] * theta[i];
    if (spec.degree >= 2) {
        for (int i = 0; i < d; ++i)
            for (int j = i; j < d; ++j) {
                const double mult = (i == j) ? 1.0 : 2.0;
                value += mult * phi[pos++] * theta[i] * theta[j];
            }
    }
    if (spec.degree >= 3) {
        for (int i = 0; i < d; ++i)
            for (int j = i; j < d; ++j)
                for (int k = j; k < d; ++k) {
                    double mult = 6.0;
                    if (i == j && j == k) mult = 1.0;
                    else if (i == j || j == k) mult = 3.0;
                    value += mult * phi[pos++] * theta[i] * theta[j] * theta[k];
                }
    }
    return value;
}

/// Laplacian[P](theta) + grad[P](theta).u via central finite differences of
/// eval_polynomial; the independent route for checking the monomial map.
inline double control_variate_by_differences(const Eigen::VectorXd& theta,
                                             const Eigen::VectorXd& u,
                                             const Eigen::VectorXd& phi,
                                             const rvcv::PolynomialSpec& spec,
                                             double h = 1e-5) {
    const int d = spec.dimension;
    double value = 0.0;
    const double p0 = eval_polynomial(theta, phi, spec);
    for (int i = 0; i < d; ++i) {
        Eigen::VectorXd up = theta, down = theta;
        up[i] += h;
        down[i] -= h;
        const double pu = eval_polynomial(up, phi, spec);
        const double pd = eval_polynomial(down, phi, spec);
        value += (pu - 2.0 * p0 + pd) / (h * h);       // second derivative
        value += u[i] * (pu - pd) / (2.0 * h);         // gradient . u
    }
    return value;
}

/// Composite Simpson on [a, b] with n (even) intervals.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n) {
    const double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 == 1 ? 4.0 : 2.0);
    return s * h / 3.0;
}

/// Classic RK4 for the deterministic SIR drift system (the N -> infinity
/// limit of the diffusion).
inline std::vector<Eigen::Vector2d> rk4_sir(const Eigen::Vector2d& x0, double theta1,
                                            double theta2, double t_end, double dt) {
    auto f = [&](const Eigen::Vector2d& x) {
        const double infect = theta1 * x[0] * x[1];
        return Eigen::Vector2d(-infect, infect - theta2 * x[1]);
    };
    const int steps = static_cast<int>(std::llround(t_end / dt));
    std::vector<Eigen::Vector2d> out;
    out.reserve(steps + 1);
    Eigen::Vector2d x = x0;
    out.push_back(x);
    for (int i = 0; i < steps; ++i) {
        const Eigen::Vector2d k1 = f(x);
        const Eigen::Vector2d k2 = f(x + 0.5 * dt * k1);
        const Eigen::Vector2d k3 = f(x + 0.5 * dt * k2);
        const Eigen::Vector2d k4 = f(x + dt * k3);
        x += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        out.push_back(x);
    }
    return out;
}

}  // namespace oracles
