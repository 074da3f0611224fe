#include "rvcv/sde/path.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include "rvcv/io_util.hpp"

namespace rvcv::sde {

void SdePath::validate() const {
    const Eigen::Index n = times.size();
    if (n < 2) throw std::invalid_argument("SdePath: need at least 2 mesh points");
    if (states.rows() != n || observed.size() != static_cast<std::size_t>(n))
        throw std::invalid_argument("SdePath: times/states/mask size mismatch");
    const double h = times[1] - times[0];
    if (!(h > 0.0)) throw std::invalid_argument("SdePath: times must be increasing");
    for (Eigen::Index i = 1; i < n; ++i) {
        const double step = times[i] - times[i - 1];
        if (!(step > 0.0) || std::abs(step - h) > 1e-9 * h)
            throw std::invalid_argument("SdePath: mesh must be uniform");
    }
    if (!states.allFinite()) throw std::invalid_argument("SdePath: non-finite state");
}

SdePath read_path(std::istream& in) {
    std::vector<double> t, x1, x2;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        double a, b, c;
        if (!(ls >> a >> b >> c))
            throw std::invalid_argument("read_path: expected rows of (time, X1, X2)");
        t.push_back(a);
        x1.push_back(b);
        x2.push_back(c);
    }
    if (t.size() < 2) throw std::invalid_argument("read_path: need at least 2 rows");

    SdePath path;
    path.times = Eigen::Map<Eigen::VectorXd>(t.data(), static_cast<Eigen::Index>(t.size()));
    path.states.resize(static_cast<Eigen::Index>(t.size()), 2);
    for (std::size_t i = 0; i < t.size(); ++i) {
        path.states(static_cast<Eigen::Index>(i), 0) = x1[i];
        path.states(static_cast<Eigen::Index>(i), 1) = x2[i];
    }
    path.observed.assign(t.size(), 1);
    path.validate();
    return path;
}

SdePath read_path_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("read_path_file: cannot open " + path);
    return read_path(in);
}

void write_path(std::ostream& out, const SdePath& path, bool observed_only) {
    out << "# time X1 X2\n";
    for (Eigen::Index i = 0; i < path.size(); ++i) {
        if (observed_only && !path.observed[static_cast<std::size_t>(i)]) continue;
        out << format_double(path.times[i]) << ' ' << format_double(path.states(i, 0))
            << ' ' << format_double(path.states(i, 1)) << '\n';
    }
}

void write_path_file(const std::string& path, const SdePath& p, bool observed_only) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_path_file: cannot open " + path);
    write_path(out, p, observed_only);
}

}  // namespace rvcv::sde
