#include "rvcv/grf/ising.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "rvcv/errors.hpp"
#include "rvcv/rng.hpp"

namespace rvcv::grf {

IsingLattice::IsingLattice(int r, int c, std::int8_t fill)
    : rows(r), cols(c), spins(static_cast<std::size_t>(r) * c, fill) {
    if (r < 1 || c < 1) throw std::invalid_argument("IsingLattice: bad shape");
}

double ising_suff_stat(const IsingLattice& lattice) {
    long long s = 0;
    for (int r = 0; r < lattice.rows; ++r) {
        for (int c = 0; c < lattice.cols; ++c) {
            const int v = lattice.at(r, c);
            if (r + 1 < lattice.rows) s += v * lattice.at(r + 1, c);
            if (c + 1 < lattice.cols) s += v * lattice.at(r, c + 1);
        }
    }
    return static_cast<double>(s);
}

namespace {

// Working copy with a zero border so boundary sites need no branches; the
// zero padding realises the free boundary.
struct GibbsState {
    int rows, cols, stride;
    std::vector<std::int8_t> padded;
    // P(spin=+1 | neighbour sum) as a raw 64-bit threshold, indexed by sum+4.
    std::uint64_t p_plus[9];

    GibbsState(double theta, int r, int c)
        : rows(r), cols(c), stride(c + 2),
          padded(static_cast<std::size_t>(r + 2) * (c + 2), 0) {
        for (int ns = -4; ns <= 4; ++ns) {
            const double p = 1.0 / (1.0 + std::exp(-2.0 * theta * ns));
            p_plus[ns + 4] = p >= 1.0 ? ~std::uint64_t{0}
                                      : static_cast<std::uint64_t>(p * 0x1.0p64);
        }
    }

    std::int8_t& at(int r, int c) {
        return padded[static_cast<std::size_t>(r + 1) * stride + (c + 1)];
    }

    void randomise(Rng& rng) {
        for (int r = 0; r < rows; ++r)
            for (int c = 0; c < cols; ++c)
                at(r, c) = rng.bernoulli(0.5) ? std::int8_t{1} : std::int8_t{-1};
    }

    void sweep(Rng& rng) {
        for (int r = 0; r < rows; ++r) {
            std::int8_t* row = &at(r, 0);
            const std::int8_t* up = row - stride;
            const std::int8_t* down = row + stride;
            for (int c = 0; c < cols; ++c) {
                const int ns = up[c] + down[c] + row[c - 1] + row[c + 1];
                row[c] = rng.next_u64() < p_plus[ns + 4] ? std::int8_t{1} : std::int8_t{-1};
            }
        }
    }

    IsingLattice snapshot() const {
        IsingLattice out(rows, cols);
        for (int r = 0; r < rows; ++r)
            for (int c = 0; c < cols; ++c)
                out.at(r, c) =
                    padded[static_cast<std::size_t>(r + 1) * stride + (c + 1)];
        return out;
    }
};

}  // namespace

std::vector<IsingLattice> ising_gibbs_forward(double theta, int rows, int cols,
                                              int burn_in, int lag, int K,
                                              std::uint64_t seed) {
    if (rows < 1 || cols < 1) throw std::invalid_argument("ising_gibbs_forward: bad shape");
    std::vector<IsingLattice> draws;
    if (K <= 0) return draws;
    draws.reserve(K);

    Rng rng(seed);
    GibbsState state(theta, rows, cols);
    state.randomise(rng);
    for (int i = 0; i < burn_in; ++i) state.sweep(rng);
    draws.push_back(state.snapshot());
    for (int k = 1; k < K; ++k) {
        for (int i = 0; i < lag; ++i) state.sweep(rng);
        draws.push_back(state.snapshot());
    }
    return draws;
}

IsingLattice ising_gibbs_single(double theta, int rows, int cols, int burn_in,
                                std::uint64_t seed) {
    if (rows < 1 || cols < 1) throw std::invalid_argument("ising_gibbs_single: bad shape");
    Rng rng(seed);
    GibbsState state(theta, rows, cols);
    state.randomise(rng);
    for (int i = 0; i < burn_in; ++i) state.sweep(rng);
    return state.snapshot();
}

double ising_log_partition_exact(double theta, int rows, int cols) {
    if (rows < 1 || cols < 1)
        throw std::invalid_argument("ising_log_partition_exact: bad shape");
    // Recurse along the longer dimension so the state space is 2^min(rows,cols).
    const int m = std::min(rows, cols);
    const int n = std::max(rows, cols);
    if (m > 20)
        throw ResourceError("ising_log_partition_exact: min(rows,cols) > 20");

    const std::size_t nstates = std::size_t{1} << m;
    const std::size_t mask = nstates - 1;
    const double w[5] = {std::exp(-2.0 * theta), std::exp(-theta), 1.0,
                         std::exp(theta), std::exp(2.0 * theta)};

    // Seed with the first column: within-column vertical pairs only.
    std::vector<double> v(nstates), vnext(nstates);
    for (std::size_t s = 0; s < nstates; ++s) {
        int e = 0;
        for (int r = 0; r + 1 < m; ++r) {
            const int a = (s >> r) & 1 ? 1 : -1;
            const int b = (s >> (r + 1)) & 1 ? 1 : -1;
            e += a * b;
        }
        v[s] = std::exp(theta * static_cast<double>(e));
    }

    double log_scale = 0.0;
    auto renormalise = [&]() {
        const double vmax = *std::max_element(v.begin(), v.end());
        for (auto& x : v) x /= vmax;
        log_scale += std::log(vmax);
    };
    renormalise();

    // Window state: bit 0 is the most recent site, bit m-1 the site one
    // column to the left of the next site to be placed.
    for (int c = 1; c < n; ++c) {
        for (int r = 0; r < m; ++r) {
            std::fill(vnext.begin(), vnext.end(), 0.0);
            for (std::size_t s = 0; s < nstates; ++s) {
                const double vs = v[s];
                if (vs == 0.0) continue;
                const int left = (s >> (m - 1)) & 1 ? 1 : -1;
                const int up = (r > 0) ? ((s & 1) ? 1 : -1) : 0;
                for (int bit = 0; bit <= 1; ++bit) {
                    const int spin = 2 * bit - 1;
                    const int e = spin * (left + up);
                    vnext[((s << 1) | static_cast<std::size_t>(bit)) & mask] +=
                        vs * w[e + 2];
                }
            }
            v.swap(vnext);
        }
        renormalise();
    }

    double total = 0.0;
    for (double x : v) total += x;
    return std::log(total) + log_scale;
}

namespace {

void check_brute_size(int rows, int cols, const char* who) {
    if (rows < 1 || cols < 1 || rows * cols > 24)
        throw ResourceError(std::string(who) + ": lattice too large for brute force");
}

double lattice_stat_from_mask(std::uint32_t mask, int rows, int cols) {
    IsingLattice lat(rows, cols);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c)
            lat.at(r, c) = (mask >> (r * cols + c)) & 1 ? std::int8_t{1} : std::int8_t{-1};
    return ising_suff_stat(lat);
}

}  // namespace

double ising_log_partition_bruteforce(double theta, int rows, int cols) {
    check_brute_size(rows, cols, "ising_log_partition_bruteforce");
    const std::uint32_t n = 1u << (rows * cols);
    double max_e = -1e300;
    std::vector<double> energies(n);
    for (std::uint32_t msk = 0; msk < n; ++msk) {
        energies[msk] = theta * lattice_stat_from_mask(msk, rows, cols);
        max_e = std::max(max_e, energies[msk]);
    }
    double sum = 0.0;
    for (double e : energies) sum += std::exp(e - max_e);
    return max_e + std::log(sum);
}

double ising_mean_stat_bruteforce(double theta, int rows, int cols) {
    check_brute_size(rows, cols, "ising_mean_stat_bruteforce");
    const std::uint32_t n = 1u << (rows * cols);
    double max_e = -1e300;
    std::vector<double> stats(n), energies(n);
    for (std::uint32_t msk = 0; msk < n; ++msk) {
        stats[msk] = lattice_stat_from_mask(msk, rows, cols);
        energies[msk] = theta * stats[msk];
        max_e = std::max(max_e, energies[msk]);
    }
    double num = 0.0, den = 0.0;
    for (std::uint32_t msk = 0; msk < n; ++msk) {
        const double w = std::exp(energies[msk] - max_e);
        num += stats[msk] * w;
        den += w;
    }
    return num / den;
}

namespace {

// Composite quadrature weights on a uniform grid; Simpson needs an odd number
// of points.
double integrate_trapezoid(const Eigen::VectorXd& f, double h) {
    double s = 0.5 * (f[0] + f[f.size() - 1]);
    for (Eigen::Index i = 1; i + 1 < f.size(); ++i) s += f[i];
    return s * h;
}

double integrate_simpson(const Eigen::VectorXd& f, double h) {
    const Eigen::Index n = f.size();
    double s = f[0] + f[n - 1];
    for (Eigen::Index i = 1; i + 1 < n; ++i) s += f[i] * ((i % 2 == 1) ? 4.0 : 2.0);
    return s * h / 3.0;
}

}  // namespace

double ising_posterior_mean_grid(const IsingLattice& data, double prior_sd,
                                 const Eigen::VectorXd& grid) {
    if (!(prior_sd > 0.0))
        throw std::invalid_argument("ising_posterior_mean_grid: prior_sd must be positive");
    const Eigen::Index n = grid.size();
    if (n < 3 || n % 2 == 0)
        throw std::invalid_argument(
            "ising_posterior_mean_grid: need an odd number of grid points >= 3");
    const double h = grid[1] - grid[0];
    for (Eigen::Index i = 1; i < n; ++i) {
        const double step = grid[i] - grid[i - 1];
        if (!(step > 0.0) || std::abs(step - h) > 1e-9 * std::abs(h))
            throw std::invalid_argument("ising_posterior_mean_grid: grid must be uniform");
    }

    const double s_obs = ising_suff_stat(data);
    Eigen::VectorXd logw(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double theta = grid[i];
        logw[i] = theta * s_obs - ising_log_partition_exact(theta, data.rows, data.cols) -
                  theta * theta / (2.0 * prior_sd * prior_sd);
    }
    const double shift = logw.maxCoeff();
    Eigen::VectorXd w = (logw.array() - shift).exp();
    if (w[0] > 1e-8 || w[n - 1] > 1e-8)
        throw GridError("ising_posterior_mean_grid: grid does not cover the posterior mass");

    const Eigen::VectorXd tw = grid.cwiseProduct(w);
    const double mean_trap = integrate_trapezoid(tw, h) / integrate_trapezoid(w, h);
    const double mean_simp = integrate_simpson(tw, h) / integrate_simpson(w, h);
    if (std::abs(mean_trap - mean_simp) > 1e-6 * std::max(1.0, std::abs(mean_simp)))
        throw GridError("ising_posterior_mean_grid: grid too coarse (trapezoid vs Simpson)");
    return mean_simp;
}

IsingLattice read_lattice(std::istream& in, bool* remapped) {
    std::vector<std::vector<int>> rows;
    std::string line;
    bool saw_zero = false, saw_minus = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::vector<int> row;
        int v;
        while (ls >> v) {
            if (v == 0) saw_zero = true;
            else if (v == -1) saw_minus = true;
            else if (v != 1) throw std::invalid_argument("read_lattice: entries must be -1/0/1");
            row.push_back(v);
        }
        if (!row.empty()) rows.push_back(std::move(row));
    }
    if (rows.empty()) throw std::invalid_argument("read_lattice: empty input");
    if (saw_zero && saw_minus)
        throw std::invalid_argument("read_lattice: mixed 0/1 and -1/+1 encodings");
    const std::size_t cols = rows.front().size();
    for (const auto& r : rows)
        if (r.size() != cols) throw std::invalid_argument("read_lattice: ragged rows");

    if (remapped) *remapped = saw_zero;
    IsingLattice lat(static_cast<int>(rows.size()), static_cast<int>(cols));
    for (int r = 0; r < lat.rows; ++r)
        for (int c = 0; c < lat.cols; ++c)
            lat.at(r, c) = rows[r][c] == 1 ? std::int8_t{1} : std::int8_t{-1};
    return lat;
}

IsingLattice read_lattice_file(const std::string& path, bool* remapped) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("read_lattice_file: cannot open " + path);
    return read_lattice(in, remapped);
}

void write_lattice(std::ostream& out, const IsingLattice& lattice) {
    for (int r = 0; r < lattice.rows; ++r) {
        for (int c = 0; c < lattice.cols; ++c) {
            if (c) out << ' ';
            out << static_cast<int>(lattice.at(r, c));
        }
        out << '\n';
    }
}

void write_lattice_file(const std::string& path, const IsingLattice& lattice) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_lattice_file: cannot open " + path);
    write_lattice(out, lattice);
}

}  // namespace rvcv::grf
