#include <CLI11.hpp>

#include <Eigen/Core>

#include <cstdio>
#include <exception>
#include <iostream>
#include <string>

#include "rvcv/errors.hpp"
#include "rvcv/experiments/config.hpp"
#include "rvcv/experiments/run.hpp"
#include "rvcv/grf/ergm.hpp"
#include "rvcv/grf/ising.hpp"
#include "rvcv/io_util.hpp"
#include "rvcv/rng.hpp"
#include "rvcv/sde/path.hpp"

namespace {

struct GridSpec {
    double lo = 0.0, hi = 1.0;
    int n = 101;
};

GridSpec parse_grid(const std::string& s) {
    GridSpec g;
    if (std::sscanf(s.c_str(), "%lf:%lf:%d", &g.lo, &g.hi, &g.n) != 3)
        throw std::invalid_argument("grid: expected lo:hi:n, got '" + s + "'");
    if (g.n < 3 || !(g.hi > g.lo)) throw std::invalid_argument("grid: need hi > lo and n >= 3");
    return g;
}

int run_command(const std::string& config_path, unsigned cores, const std::string& out_dir) {
    auto cfg = rvcv::experiments::parse_config_file(config_path);
    if (cores > 0) cfg.workers = cores;
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    const auto report = rvcv::experiments::run_and_write(cfg);
    std::cout << "experiment " << report.experiment << ": " << report.rows.size()
              << " report rows";
    if (!report.allocation.empty())
        std::cout << ", " << report.allocation.size() << " allocation rows";
    std::cout << " -> " << cfg.out_dir << "\n";
    return 0;
}

int gen_data_command(const std::string& experiment, std::uint64_t seed,
                     const std::string& out, const rvcv::experiments::ExperimentConfig& p) {
    if (experiment == "ising") {
        const auto lattice = rvcv::grf::ising_gibbs_single(p.theta_true, p.rows, p.cols,
                                                           p.gen_burn_in, seed);
        rvcv::grf::write_lattice_file(out, lattice);
        std::cout << "wrote " << p.rows << "x" << p.cols << " lattice, s = "
                  << rvcv::format_double(rvcv::grf::ising_suff_stat(lattice)) << "\n";
    } else if (experiment == "ergm") {
        const auto graph = rvcv::grf::ergm_gibbs_single(
            Eigen::Vector2d(p.ergm_theta1_true, p.ergm_theta2_true), p.n_nodes,
            p.gen_burn_in, seed);
        rvcv::grf::write_adjacency_file(out, graph);
        const auto s = rvcv::grf::ergm_suff_stats(graph);
        std::cout << "wrote graph on " << p.n_nodes << " nodes, s = (" << s[0] << ", "
                  << s[1] << ")\n";
    } else if (experiment == "sir") {
        const auto obs = rvcv::experiments::generate_sir_observations(
            rvcv::sde::SirParams(p.sir_theta1_true, p.sir_theta2_true, p.population),
            Eigen::Vector2d(p.x0_s, p.x0_i), p.t_end, p.n_obs, p.n_latent, seed);
        rvcv::sde::write_path_file(out, obs);
        std::cout << "wrote " << p.n_obs << " SIR observations over [0, "
                  << rvcv::format_double(p.t_end) << "]\n";
    } else {
        throw std::invalid_argument("gen-data: experiment must be ising, ergm or sir");
    }
    return 0;
}

int oracle_command(const std::string& experiment, const std::string& grid_spec,
                   const std::string& data_file, double prior_sd,
                   const rvcv::experiments::ExperimentConfig& p, std::uint64_t seed) {
    if (experiment != "ising")
        throw std::invalid_argument("oracle: only the ising grid oracle is available");
    const GridSpec g = parse_grid(grid_spec);
    const int n = g.n % 2 == 0 ? g.n + 1 : g.n;  // Simpson needs an odd count

    rvcv::grf::IsingLattice data;
    if (!data_file.empty()) {
        data = rvcv::grf::read_lattice_file(data_file);
    } else {
        data = rvcv::grf::ising_gibbs_single(p.theta_true, p.rows, p.cols, p.gen_burn_in, seed);
    }
    const double mean = rvcv::grf::ising_posterior_mean_grid(
        data, prior_sd, Eigen::VectorXd::LinSpaced(n, g.lo, g.hi));
    std::cout << rvcv::format_double(mean) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Reduced-variance control variates for intractable likelihoods"};
    app.require_subcommand(1);

    unsigned cores = 0;
    app.add_option("--cores", cores, "worker threads (default: hardware parallelism)");

    // run
    auto* run = app.add_subcommand("run", "run a configured experiment");
    std::string config_path, out_dir;
    run->add_option("--config", config_path, "experiment config file")->required();
    run->add_option("--out", out_dir, "output directory (overrides config)");

    // shared model parameter options for gen-data / oracle
    rvcv::experiments::ExperimentConfig params;
    std::uint64_t seed = 1;
    std::string experiment, out_file, grid_spec = "-0.1:0.9:501", data_file;
    double prior_sd = 5.0;

    auto add_model_options = [&](CLI::App* cmd) {
        cmd->add_option("--rows", params.rows, "ising rows");
        cmd->add_option("--cols", params.cols, "ising cols");
        cmd->add_option("--theta", params.theta_true, "ising generating parameter");
        cmd->add_option("--burn-in", params.gen_burn_in, "generation Gibbs sweeps");
        cmd->add_option("--n-nodes", params.n_nodes, "ergm node count");
        cmd->add_option("--theta1", params.ergm_theta1_true, "ergm edge parameter");
        cmd->add_option("--theta2", params.ergm_theta2_true, "ergm two-star parameter");
        cmd->add_option("--n-obs", params.n_obs, "sir observation count");
        cmd->add_option("--t-end", params.t_end, "sir time horizon");
        cmd->add_option("--n-latent", params.n_latent, "sir latent points per gap");
        cmd->add_option("--sir-theta1", params.sir_theta1_true, "sir infection rate");
        cmd->add_option("--sir-theta2", params.sir_theta2_true, "sir recovery rate");
        cmd->add_option("--population", params.population, "sir population size");
    };

    auto* gen = app.add_subcommand("gen-data", "generate a dataset");
    gen->add_option("--experiment", experiment, "ising | ergm | sir")->required();
    gen->add_option("--seed", seed, "generation seed");
    gen->add_option("--out", out_file, "output file")->required();
    add_model_options(gen);

    auto* oracle = app.add_subcommand("oracle", "grid-quadrature posterior mean");
    oracle->add_option("--experiment", experiment, "ising")->required();
    oracle->add_option("--theta-grid", grid_spec, "grid as lo:hi:n");
    oracle->add_option("--data", data_file, "lattice file (default: self-generate)");
    oracle->add_option("--prior-sd", prior_sd, "Gaussian prior sd");
    oracle->add_option("--seed", seed, "self-generation seed");
    add_model_options(oracle);

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return run_command(config_path, cores, out_dir);
        if (gen->parsed()) return gen_data_command(experiment, seed, out_file, params);
        if (oracle->parsed())
            return oracle_command(experiment, grid_spec, data_file, prior_sd, params, seed);
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const rvcv::ResourceError& e) {
        std::cerr << "resource error: " << e.what() << "\n";
        return 5;
    } catch (const rvcv::DegenerateDesignError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 4;
    } catch (const rvcv::GridError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 4;
    } catch (const rvcv::SdeDegeneracyError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 4;
    } catch (const rvcv::SimulationFailure& e) {
        std::cerr << "simulation error: " << e.what() << "\n";
        return 4;
    } catch (const std::runtime_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
