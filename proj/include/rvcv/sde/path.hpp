#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace rvcv::sde {

/// Discretised two-component diffusion trajectory on a uniform time mesh.
/// Column 0 is the susceptible proportion, column 1 the infected proportion.
/// `observed[i]` marks mesh points whose states are data (the rest are
/// latent).
struct SdePath {
    Eigen::VectorXd times;
    Eigen::Matrix<double, Eigen::Dynamic, 2> states;
    std::vector<std::uint8_t> observed;

    Eigen::Index size() const { return times.size(); }

    double dt() const {
        if (times.size() < 2) throw std::invalid_argument("SdePath: need >= 2 points");
        return times[1] - times[0];
    }

    /// Enforces the mesh invariants: strictly increasing times with constant
    /// spacing, finite states, mask length matching.
    void validate() const;
};

/// Delimited text with columns (time, X1, X2); used both for observation
/// ingestion and for writing simulated data. Only rows present in the file
/// exist in the returned path, all marked observed.
SdePath read_path(std::istream& in);
SdePath read_path_file(const std::string& path);
void write_path(std::ostream& out, const SdePath& path, bool observed_only = false);
void write_path_file(const std::string& path, const SdePath& p, bool observed_only = false);

}  // namespace rvcv::sde
