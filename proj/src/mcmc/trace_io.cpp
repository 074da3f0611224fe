#include "rvcv/mcmc/chain.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>

#include "rvcv/io_util.hpp"

namespace rvcv::mcmc {

Prior gaussian_prior(double sd) {
    if (!(sd > 0.0)) throw std::invalid_argument("gaussian_prior: sd must be positive");
    const double inv_var = 1.0 / (sd * sd);
    return Prior{
        [inv_var](const Eigen::VectorXd& t) { return -0.5 * inv_var * t.squaredNorm(); },
        [inv_var](const Eigen::VectorXd& t) { return Eigen::VectorXd(-inv_var * t); }};
}

Prior flat_positive_prior() {
    return Prior{[](const Eigen::VectorXd& t) {
                     return (t.array() > 0.0).all()
                                ? 0.0
                                : -std::numeric_limits<double>::infinity();
                 },
                 [](const Eigen::VectorXd& t) { return Eigen::VectorXd::Zero(t.size()); }};
}

Prior gamma_prior(double shape, double scale) {
    if (!(shape > 0.0) || !(scale > 0.0))
        throw std::invalid_argument("gamma_prior: shape and scale must be positive");
    return Prior{[shape, scale](const Eigen::VectorXd& t) {
                     if (!(t.array() > 0.0).all())
                         return -std::numeric_limits<double>::infinity();
                     return ((shape - 1.0) * t.array().log() - t.array() / scale).sum();
                 },
                 [shape, scale](const Eigen::VectorXd& t) {
                     return Eigen::VectorXd((shape - 1.0) / t.array() - 1.0 / scale);
                 }};
}

void write_trace(std::ostream& out, const ChainOutput& chain) {
    const Eigen::Index d = chain.thetas.cols();
    const bool has_u = chain.u_hats.size() > 0;
    out << "iteration";
    for (Eigen::Index j = 0; j < d; ++j) out << "\ttheta" << j + 1;
    if (has_u)
        for (Eigen::Index j = 0; j < d; ++j) out << "\tuhat" << j + 1;
    out << "\taccept\n";
    for (Eigen::Index i = 0; i < chain.thetas.rows(); ++i) {
        out << i + 1;
        for (Eigen::Index j = 0; j < d; ++j) out << '\t' << format_double(chain.thetas(i, j));
        if (has_u)
            for (Eigen::Index j = 0; j < d; ++j)
                out << '\t' << format_double(chain.u_hats(i, j));
        out << '\t' << static_cast<int>(chain.accepted[static_cast<std::size_t>(i)]) << '\n';
    }
}

void write_trace_file(const std::string& path, const ChainOutput& chain) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_trace_file: cannot open " + path);
    write_trace(out, chain);
}

}  // namespace rvcv::mcmc
