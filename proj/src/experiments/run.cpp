#include "rvcv/experiments/run.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <limits>
#include <stdexcept>

#include "rvcv/control_variates.hpp"
#include "rvcv/grf/ergm.hpp"
#include "rvcv/grf/exponential.hpp"
#include "rvcv/grf/ising.hpp"
#include "rvcv/mcmc/exchange.hpp"
#include "rvcv/mcmc/rwm.hpp"
#include "rvcv/parallel.hpp"
#include "rvcv/polynomial.hpp"
#include "rvcv/score.hpp"
#include "rvcv/sde/bridge.hpp"
#include "rvcv/sde/euler.hpp"
#include "rvcv/stats.hpp"

namespace rvcv::experiments {

namespace {

constexpr std::uint64_t kDataTag = 0xDA7Aull;

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

unsigned effective_workers(const ExperimentConfig& cfg) {
    return cfg.workers == 0 ? default_worker_count() : cfg.workers;
}

Eigen::VectorXd to_vector(const std::vector<double>& v, Eigen::Index d, double fallback) {
    if (v.empty()) return Eigen::VectorXd::Constant(d, fallback);
    if (static_cast<Eigen::Index>(v.size()) != d)
        throw std::invalid_argument("config: expected " + std::to_string(d) + " components");
    return Eigen::Map<const Eigen::VectorXd>(v.data(), d);
}

/// Builds the monomial matrix for one replicate chain.
Eigen::MatrixXd monomial_matrix(const mcmc::ChainOutput& chain, const PolynomialSpec& spec) {
    const Eigen::Index n = chain.thetas.rows();
    Eigen::MatrixXd m(n, coefficient_count(spec));
    for (Eigen::Index i = 0; i < n; ++i)
        m.row(i) = monomial_map(chain.thetas.row(i).transpose(),
                                chain.u_hats.row(i).transpose(), spec);
    return m;
}

/// Aggregates one (I, K) cell over replicates into report rows, one per
/// (degree, target function).
void summarize_cell(const std::vector<mcmc::ChainOutput>& reps, std::int64_t I, int K,
                    const ExperimentConfig& cfg, double runtime_s,
                    std::vector<ReportRow>& rows) {
    const Eigen::Index d = reps.front().thetas.cols();
    const int n_reps = static_cast<int>(reps.size());
    const auto mode = cfg.raw_moments ? MomentMode::raw : MomentMode::centered;

    struct Cell {
        Eigen::VectorXd mu_unc, mu_ctrl, se_unc, se_ctrl, rho_abs;
        double R = 0, rho = 0, acceptance = 0;
        Eigen::VectorXd phi;
    };
    std::vector<Cell> cells(cfg.degrees.size() * static_cast<std::size_t>(d));
    for (auto& c : cells) {
        c.mu_unc.resize(n_reps);
        c.mu_ctrl.resize(n_reps);
        c.se_unc.resize(n_reps);
        c.se_ctrl.resize(n_reps);
        c.rho_abs.resize(n_reps);
    }

    for (int r = 0; r < n_reps; ++r) {
        const auto& chain = reps[static_cast<std::size_t>(r)];
        const Eigen::Index n = chain.thetas.rows();
        const Eigen::Index fit_n = cfg.split_half ? n / 2 : n;
        const Eigen::Index eval_start = cfg.split_half ? n / 2 : 0;
        const Eigen::Index eval_n = n - eval_start;

        for (std::size_t di = 0; di < cfg.degrees.size(); ++di) {
            const PolynomialSpec spec(static_cast<int>(d), cfg.degrees[di]);
            const Eigen::MatrixXd m = monomial_matrix(chain, spec);
            for (Eigen::Index j = 0; j < d; ++j) {
                Cell& cell = cells[di * static_cast<std::size_t>(d) + static_cast<std::size_t>(j)];
                const Eigen::VectorXd g = chain.thetas.col(j);
                const Eigen::VectorXd phi = estimate_optimal_coeffs(
                    g.head(fit_n), m.topRows(fit_n), mode);
                const Eigen::VectorXd g_eval = g.segment(eval_start, eval_n);
                const Eigen::VectorXd ctrl =
                    controlled_values(g_eval, m.middleRows(eval_start, eval_n), phi);
                const CvDiagnostics diag = variance_reduction_factor(g_eval, ctrl);

                cell.mu_unc[r] = g_eval.mean();
                cell.mu_ctrl[r] = ctrl.mean();
                cell.se_unc[r] = iid_se(g_eval);
                cell.se_ctrl[r] = iid_se(ctrl);
                cell.rho_abs[r] = std::abs(diag.rho);
                if (r == 0) {
                    cell.R = diag.R;
                    cell.rho = diag.rho;
                    cell.phi = phi;
                    cell.acceptance = chain.acceptance_rate;
                }
            }
        }
    }

    for (std::size_t di = 0; di < cfg.degrees.size(); ++di) {
        for (Eigen::Index j = 0; j < d; ++j) {
            const Cell& cell = cells[di * static_cast<std::size_t>(d) + static_cast<std::size_t>(j)];
            ReportRow row;
            row.I = I;
            row.K = K;
            row.degree = cfg.degrees[di];
            row.target = static_cast<int>(j);
            row.mu_uncontrolled = cell.mu_unc.mean();
            row.mu_controlled = cell.mu_ctrl.mean();
            row.std_mu_uncontrolled = cell.se_unc.mean();
            row.std_mu_controlled = cell.se_ctrl.mean();
            row.se_std_mu_controlled =
                n_reps > 1 ? std::sqrt(sample_variance(cell.se_ctrl) / n_reps) : 0.0;
            row.R = cell.R;
            row.rho = cell.rho;
            row.rho_mean_abs = cell.rho_abs.mean();
            row.sqrtIK_std_mu =
                std::sqrt(static_cast<double>(I) * K) * row.std_mu_controlled;
            row.replicates = n_reps;
            row.acceptance = cell.acceptance;
            row.phi = cell.phi;
            row.runtime_s = runtime_s;
            rows.push_back(std::move(row));
        }
    }
}

std::uint64_t replicate_seed(const ExperimentConfig& cfg, std::size_t cell_index, int rep) {
    return derive_seed(cfg.seed, cell_index, static_cast<std::uint64_t>(rep));
}

// ---------------------------------------------------------------------------
// exponential

ExperimentReport run_exponential(const ExperimentConfig& cfg, ExperimentReport report) {
    const unsigned workers = effective_workers(cfg);
    std::size_t cell = 0;
    for (std::int64_t I : cfg.I_grid) {
        for (int K : cfg.K_grid) {
            const auto t0 = std::chrono::steady_clock::now();
            std::vector<mcmc::ChainOutput> reps;
            reps.reserve(static_cast<std::size_t>(cfg.replicates));
            for (int r = 0; r < cfg.replicates; ++r) {
                mcmc::ChainConfig cc;
                cc.iterations = I;
                cc.thinning = cfg.thinning;
                cc.proposal_sd = to_vector(cfg.proposal_sd, 1, 1.7 / cfg.y);
                cc.initial_theta = to_vector(cfg.initial_theta, 1, 2.0 / cfg.y);
                cc.seed = replicate_seed(cfg, cell, r);
                reps.push_back(exponential_chain(cfg.y, cc, K, workers));
            }
            summarize_cell(reps, I, K, cfg, seconds_since(t0), report.rows);
            ++cell;
        }
    }
    return report;
}

// ---------------------------------------------------------------------------
// rho-curve: exponential cells plus the saturation-law fit

ExperimentReport run_rho_curve(const ExperimentConfig& cfg, ExperimentReport report) {
    report = run_exponential(cfg, std::move(report));

    // Mean |rho| per K at the first configured degree and I.
    const int fit_degree = cfg.degrees.front();
    const std::int64_t fit_I = cfg.I_grid.front();
    Eigen::VectorXd k_values(static_cast<Eigen::Index>(cfg.K_grid.size()));
    Eigen::VectorXd rho_values(k_values.size());
    Eigen::Index pos = 0;
    for (int K : cfg.K_grid) {
        for (const auto& row : report.rows) {
            if (row.K == K && row.degree == fit_degree && row.I == fit_I && row.target == 0) {
                k_values[pos] = K;
                rho_values[pos] = std::min(row.rho_mean_abs, 1.0 - 1e-12);
                ++pos;
                break;
            }
        }
    }
    report.fit = fit_rho_curve(k_values.head(pos), rho_values.head(pos));
    report.has_fit = true;
    return report;
}

// ---------------------------------------------------------------------------
// ising

ExperimentReport run_ising(const ExperimentConfig& cfg, ExperimentReport report) {
    const unsigned workers = effective_workers(cfg);
    grf::IsingLattice data;
    if (cfg.data_file.empty()) {
        data = grf::ising_gibbs_single(cfg.theta_true, cfg.rows, cfg.cols, cfg.gen_burn_in,
                                       derive_seed(cfg.seed, kDataTag, 0));
        report.data_note = "self-generated lattice at theta_true";
    } else {
        data = grf::read_lattice_file(cfg.data_file);
        report.data_note = "lattice from " + cfg.data_file;
    }

    const grf::IsingModel model(data.rows, data.cols, cfg.sim_burn_in, cfg.sim_lag);
    const Eigen::VectorXd s_obs = model.suff_stat(data);
    const mcmc::Prior prior = mcmc::gaussian_prior(cfg.prior_sd);

    report.oracle_mean = grf::ising_posterior_mean_grid(
        data, cfg.prior_sd, Eigen::VectorXd::LinSpaced(cfg.oracle_n, cfg.oracle_lo, cfg.oracle_hi));
    report.has_oracle = true;

    std::size_t cell = 0;
    for (std::int64_t I : cfg.I_grid) {
        for (int K : cfg.K_grid) {
            const auto t0 = std::chrono::steady_clock::now();
            std::vector<mcmc::ChainOutput> reps;
            for (int r = 0; r < cfg.replicates; ++r) {
                mcmc::ChainConfig cc;
                cc.iterations = I;
                cc.thinning = cfg.thinning;
                cc.proposal_sd = to_vector(cfg.proposal_sd, 1, 0.05);
                cc.initial_theta = to_vector(cfg.initial_theta, 1, cfg.theta_true);
                cc.seed = replicate_seed(cfg, cell, r);
                mcmc::ScoreSimConfig sc{K, workers, cfg.count_exchange_draw};
                reps.push_back(mcmc::exchange_chain(
                    model, s_obs, prior, cc, sc,
                    mcmc::GaussianProposal{cc.proposal_sd}));
            }
            summarize_cell(reps, I, K, cfg, seconds_since(t0), report.rows);
            ++cell;
        }
    }
    return report;
}

// ---------------------------------------------------------------------------
// ergm

ExperimentReport run_ergm(const ExperimentConfig& cfg, ExperimentReport report) {
    const unsigned workers = effective_workers(cfg);
    grf::Graph data;
    if (cfg.data_file.empty()) {
        data = grf::ergm_gibbs_single(
            Eigen::Vector2d(cfg.ergm_theta1_true, cfg.ergm_theta2_true), cfg.n_nodes,
            cfg.gen_burn_in, derive_seed(cfg.seed, kDataTag, 1));
        report.data_note = "self-generated graph at (ergm_theta1_true, ergm_theta2_true)";
    } else {
        data = grf::read_graph_file(cfg.data_file);
        report.data_note = "graph from " + cfg.data_file;
    }

    const grf::ErgmModel model(data.n, cfg.sim_burn_in, cfg.sim_lag);
    const Eigen::VectorXd s_obs = model.suff_stat(data);
    const mcmc::Prior prior = mcmc::gaussian_prior(cfg.prior_sd);

    std::size_t cell = 0;
    for (std::int64_t I : cfg.I_grid) {
        for (int K : cfg.K_grid) {
            const auto t0 = std::chrono::steady_clock::now();
            std::vector<mcmc::ChainOutput> reps;
            for (int r = 0; r < cfg.replicates; ++r) {
                mcmc::ChainConfig cc;
                cc.iterations = I;
                cc.thinning = cfg.thinning;
                cc.proposal_sd = to_vector(cfg.proposal_sd, 2, 0.1);
                Eigen::VectorXd init(2);
                init << cfg.ergm_theta1_true, cfg.ergm_theta2_true;
                cc.initial_theta =
                    cfg.initial_theta.empty() ? init : to_vector(cfg.initial_theta, 2, 0.0);
                cc.seed = replicate_seed(cfg, cell, r);
                mcmc::ScoreSimConfig sc{K, workers, cfg.count_exchange_draw};
                reps.push_back(mcmc::exchange_chain(
                    model, s_obs, prior, cc, sc,
                    mcmc::GaussianProposal{cc.proposal_sd}));
            }
            summarize_cell(reps, I, K, cfg, seconds_since(t0), report.rows);
            ++cell;
        }
    }
    return report;
}

// ---------------------------------------------------------------------------
// sir

ExperimentReport run_sir(const ExperimentConfig& cfg, ExperimentReport report) {
    const unsigned workers = effective_workers(cfg);
    SirChainSetup setup;
    if (cfg.data_file.empty()) {
        setup.observations = generate_sir_observations(
            sde::SirParams(cfg.sir_theta1_true, cfg.sir_theta2_true, cfg.population),
            Eigen::Vector2d(cfg.x0_s, cfg.x0_i), cfg.t_end, cfg.n_obs, cfg.n_latent,
            derive_seed(cfg.seed, kDataTag, 2));
        report.data_note = "self-generated SIR observations at (sir_theta1_true, sir_theta2_true)";
    } else {
        setup.observations = sde::read_path_file(cfg.data_file);
        report.data_note = "observations from " + cfg.data_file;
    }
    setup.n_latent = cfg.n_latent;
    setup.inner_sweeps = cfg.inner_sweeps;
    setup.refresh_sweeps = cfg.refresh_sweeps;
    setup.population = cfg.population;
    setup.prior = mcmc::gamma_prior(cfg.prior_shape, cfg.prior_scale);

    std::size_t cell = 0;
    for (std::int64_t I : cfg.I_grid) {
        for (int K : cfg.K_grid) {
            const auto t0 = std::chrono::steady_clock::now();
            std::vector<mcmc::ChainOutput> reps;
            for (int r = 0; r < cfg.replicates; ++r) {
                mcmc::ChainConfig cc;
                cc.iterations = I;
                cc.thinning = cfg.thinning;
                Eigen::VectorXd sd(2), init(2);
                sd << 0.06, 0.03;
                init << cfg.sir_theta1_true, cfg.sir_theta2_true;
                cc.proposal_sd =
                    cfg.proposal_sd.empty() ? sd : to_vector(cfg.proposal_sd, 2, 0.05);
                cc.initial_theta =
                    cfg.initial_theta.empty() ? init : to_vector(cfg.initial_theta, 2, 0.3);
                cc.seed = replicate_seed(cfg, cell, r);
                reps.push_back(sir_chain(setup, cc, K, workers));
            }
            summarize_cell(reps, I, K, cfg, seconds_since(t0), report.rows);
            ++cell;
        }
    }
    return report;
}

// ---------------------------------------------------------------------------
// k-allocation

ExperimentReport run_k_allocation(const ExperimentConfig& cfg, ExperimentReport report) {
    double rho_inf = cfg.rho_inf;
    double C = cfg.C;
    if (!(rho_inf > 0.0) || !(C > 0.0)) {
        // Fit the saturation law from a compact internal exponential run.
        ExperimentConfig fit_cfg = cfg;
        fit_cfg.experiment = "rho-curve";
        fit_cfg.I_grid = {4000};
        fit_cfg.K_grid = {1, 2, 3, 4, 5, 6, 8, 10};
        fit_cfg.degrees = {2};
        fit_cfg.replicates = 8;
        ExperimentReport fit_report;
        fit_report.experiment = "rho-curve";
        fit_report = run_rho_curve(fit_cfg, std::move(fit_report));
        report.fit = fit_report.fit;
        report.has_fit = true;
        rho_inf = report.fit.rho_inf;
        C = report.fit.C;
    } else {
        report.fit = RhoCurveFit{rho_inf, C, 0.0};
        report.has_fit = true;
    }

    for (int K0 : cfg.K0_grid) {
        AllocationRow row;
        row.K0 = K0;
        row.argmin_K = argmin_cost_normalized_ratio(
            static_cast<std::int64_t>(cfg.K_max_factor) * K0, K0, cfg.cost_budget, rho_inf, C);
        row.r_min = cost_normalized_ratio(row.argmin_K, K0, cfg.cost_budget, rho_inf, C);
        report.allocation.push_back(row);
    }
    return report;
}

}  // namespace

mcmc::ChainOutput exponential_chain(double y, const mcmc::ChainConfig& config, int K,
                                    unsigned workers) {
    if (K < 1) throw std::invalid_argument("exponential_chain: need K >= 1");
    const grf::ExponentialGrf model(y);
    const Eigen::VectorXd s_obs = model.obs_stats();
    const Eigen::VectorXd zero_grad = Eigen::VectorXd::Zero(1);

    auto log_target = [y](const Eigen::VectorXd& t) {
        return t[0] > 0.0 ? std::log(t[0]) - t[0] * y
                          : -std::numeric_limits<double>::infinity();
    };
    auto score_hook = [&](std::int64_t i, const Eigen::VectorXd& theta) {
        auto stats = run_parallel<Eigen::VectorXd>(
            static_cast<std::size_t>(K), workers, [&](std::size_t k) {
                return model.suff_stat(model.forward_sim(
                    theta, derive_seed(config.seed, static_cast<std::uint64_t>(i), k)));
            });
        return score_type1(s_obs, stats, zero_grad, theta).u_hat;
    };
    auto out = mcmc::rwm_score_chain(log_target, score_hook, config);
    out.meta.model_id = "exponential";
    out.meta.K = K;
    out.meta.workers = workers;
    return out;
}

mcmc::ChainOutput sir_chain(const SirChainSetup& setup, const mcmc::ChainConfig& config,
                            int K, unsigned workers) {
    config.validate();
    if (K < 1) throw std::invalid_argument("sir_chain: need K >= 1");
    if (config.initial_theta.size() != 2)
        throw std::invalid_argument("sir_chain: theta is two-dimensional");
    setup.observations.validate();

    sde::SdePath current = sde::init_bridge_path(setup.observations, setup.n_latent);
    Eigen::VectorXd theta = config.initial_theta;
    double lp = setup.prior.log_density(theta);
    if (!std::isfinite(lp))
        throw std::invalid_argument("sir_chain: prior not finite at initial point");

    auto params_at = [&](const Eigen::VectorXd& t) {
        return sde::SirParams(t[0], t[1], setup.population);
    };
    double ll = sde::em_log_likelihood(current, params_at(theta));
    if (!std::isfinite(ll))
        throw std::invalid_argument("sir_chain: likelihood not finite at initial path");

    const std::int64_t kept = config.iterations / config.thinning;
    mcmc::ChainOutput out;
    out.thetas.resize(kept, 2);
    out.u_hats.resize(kept, 2);
    out.accepted.reserve(static_cast<std::size_t>(kept));
    out.sim_failed.assign(static_cast<std::size_t>(kept), 0);
    out.meta.model_id = "sir";
    out.meta.K = K;
    out.meta.seed = config.seed;
    out.meta.workers = workers;

    Rng rng(config.seed);
    Eigen::VectorXi refresh_counts;
    std::int64_t n_accept = 0;
    Eigen::Index row = 0;

    for (std::int64_t i = 0; i < config.iterations; ++i) {
        sde::bridge_refresh(current, params_at(theta), setup.refresh_sweeps, rng,
                            refresh_counts);
        ll = sde::em_log_likelihood(current, params_at(theta));

        Eigen::VectorXd proposal(2);
        proposal << theta[0] + config.proposal_sd[0] * rng.normal(),
            theta[1] + config.proposal_sd[1] * rng.normal();
        const double lp_prop = setup.prior.log_density(proposal);
        bool accept = false;
        if (std::isfinite(lp_prop)) {
            const double ll_prop = sde::em_log_likelihood(current, params_at(proposal));
            accept = std::log(rng.uniform_pos()) < (ll_prop + lp_prop) - (ll + lp);
            if (accept) {
                theta = proposal;
                lp = lp_prop;
                ll = ll_prop;
                ++n_accept;
            }
        }

        const sde::SirParams params = params_at(theta);
        const Eigen::VectorXd grad_prior = setup.prior.grad_log_density(theta);
        auto scores = run_parallel<Eigen::VectorXd>(
            static_cast<std::size_t>(K), workers, [&](std::size_t k) {
                const auto draw = sde::bridge_sample_latent(
                    params, setup.observations, setup.n_latent, setup.inner_sweeps,
                    derive_seed(config.seed, static_cast<std::uint64_t>(i), k));
                return Eigen::VectorXd(sde::sde_path_score(draw.path, params) + grad_prior);
            });
        const ScoreEstimate est = score_type2(scores, theta);

        if ((i + 1) % config.thinning == 0 && row < kept) {
            out.thetas.row(row) = theta;
            out.u_hats.row(row) = est.u_hat;
            out.accepted.push_back(accept ? 1 : 0);
            ++row;
        }
    }
    out.acceptance_rate =
        static_cast<double>(n_accept) / static_cast<double>(config.iterations);
    return out;
}

sde::SdePath generate_sir_observations(const sde::SirParams& params,
                                       const Eigen::Vector2d& x0, double t_end, int n_obs,
                                       int n_latent, std::uint64_t seed) {
    if (n_obs < 2) throw std::invalid_argument("generate_sir_observations: need n_obs >= 2");
    if (n_latent < 0)
        throw std::invalid_argument("generate_sir_observations: n_latent must be >= 0");
    const int step = n_latent + 1;
    const double dt = t_end / (static_cast<double>(n_obs - 1) * step);
    const sde::SdePath full = sde::simulate_sir(params, x0, t_end, dt, seed);

    sde::SdePath obs;
    obs.times.resize(n_obs);
    obs.states.resize(n_obs, 2);
    obs.observed.assign(static_cast<std::size_t>(n_obs), 1);
    for (int i = 0; i < n_obs; ++i) {
        const Eigen::Index idx = static_cast<Eigen::Index>(i) * step;
        obs.times[i] = full.times[idx];
        obs.states.row(i) = full.states.row(idx);
    }
    obs.validate();
    return obs;
}

ExperimentReport run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    ExperimentReport report;
    report.experiment = cfg.experiment;
    try {
        if (cfg.experiment == "exponential") return run_exponential(cfg, std::move(report));
        if (cfg.experiment == "rho-curve") return run_rho_curve(cfg, std::move(report));
        if (cfg.experiment == "ising") return run_ising(cfg, std::move(report));
        if (cfg.experiment == "ergm") return run_ergm(cfg, std::move(report));
        if (cfg.experiment == "sir") return run_sir(cfg, std::move(report));
        if (cfg.experiment == "k-allocation") return run_k_allocation(cfg, std::move(report));
    } catch (const std::exception& e) {
        throw std::runtime_error("experiment '" + cfg.experiment + "' failed: " + e.what());
    }
    throw std::invalid_argument("run_experiment: unrecognised experiment " + cfg.experiment);
}

ExperimentReport run_and_write(const ExperimentConfig& cfg) {
    std::filesystem::create_directories(cfg.out_dir);
    ExperimentReport report = run_experiment(cfg);
    write_report_table(cfg.out_dir + "/report.tsv", report);
    write_timings(cfg.out_dir + "/timings.tsv", report);
    write_summary_json(cfg.out_dir + "/summary.json", report, cfg);
    return report;
}

}  // namespace rvcv::experiments
