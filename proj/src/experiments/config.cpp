#include "rvcv/experiments/config.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace rvcv::experiments {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

class KeyValues {
public:
    explicit KeyValues(std::istream& in) {
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            const auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            line = trim(line);
            if (line.empty()) continue;
            const auto eq = line.find('=');
            if (eq == std::string::npos)
                throw std::invalid_argument("config line " + std::to_string(lineno) +
                                            ": expected key = value");
            const std::string key = trim(line.substr(0, eq));
            const std::string value = trim(line.substr(eq + 1));
            if (key.empty() || value.empty())
                throw std::invalid_argument("config line " + std::to_string(lineno) +
                                            ": empty key or value");
            if (!values_.emplace(key, value).second)
                throw std::invalid_argument("config: duplicate key '" + key + "'");
        }
    }

    bool has(const std::string& key) {
        return values_.count(key) != 0;
    }

    std::string take(const std::string& key, const std::string& fallback) {
        auto it = values_.find(key);
        if (it == values_.end()) return fallback;
        consumed_.insert(consumed_.end(), key);
        std::string v = it->second;
        values_.erase(it);
        return v;
    }

    void finish() const {
        if (!values_.empty())
            throw std::invalid_argument("config: unknown key '" + values_.begin()->first + "'");
    }

private:
    std::map<std::string, std::string> values_;
    std::vector<std::string> consumed_;
};

long long to_int(const std::string& v, const std::string& key) {
    try {
        std::size_t pos = 0;
        const long long x = std::stoll(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("");
        return x;
    } catch (...) {
        throw std::invalid_argument("config: key '" + key + "' expects an integer, got '" + v + "'");
    }
}

double to_real(const std::string& v, const std::string& key) {
    try {
        std::size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("");
        return x;
    } catch (...) {
        throw std::invalid_argument("config: key '" + key + "' expects a number, got '" + v + "'");
    }
}

bool to_bool(const std::string& v, const std::string& key) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw std::invalid_argument("config: key '" + key + "' expects a boolean, got '" + v + "'");
}

}  // namespace

ExperimentConfig parse_config(std::istream& in) {
    KeyValues kv(in);
    ExperimentConfig cfg;

    cfg.experiment = kv.take("experiment", "");
    cfg.seed = static_cast<std::uint64_t>(to_int(kv.take("seed", "1"), "seed"));
    cfg.out_dir = kv.take("out", cfg.out_dir);
    cfg.workers = static_cast<unsigned>(to_int(kv.take("workers", "0"), "workers"));

    for (const auto& s : split_list(kv.take("I", "")))
        cfg.I_grid.push_back(to_int(s, "I"));
    for (const auto& s : split_list(kv.take("K", "")))
        cfg.K_grid.push_back(static_cast<int>(to_int(s, "K")));
    for (const auto& s : split_list(kv.take("degree", "")))
        cfg.degrees.push_back(static_cast<int>(to_int(s, "degree")));
    cfg.replicates = static_cast<int>(to_int(kv.take("replicates", "20"), "replicates"));
    cfg.thinning = static_cast<int>(to_int(kv.take("thinning", "1"), "thinning"));
    cfg.raw_moments = to_bool(kv.take("raw_moments", "false"), "raw_moments");
    cfg.split_half = to_bool(kv.take("split_half", "false"), "split_half");
    cfg.count_exchange_draw =
        to_bool(kv.take("count_exchange_draw", "false"), "count_exchange_draw");

    for (const auto& s : split_list(kv.take("proposal_sd", "")))
        cfg.proposal_sd.push_back(to_real(s, "proposal_sd"));
    for (const auto& s : split_list(kv.take("initial_theta", "")))
        cfg.initial_theta.push_back(to_real(s, "initial_theta"));

    cfg.y = to_real(kv.take("y", "2.0"), "y");

    cfg.rows = static_cast<int>(to_int(kv.take("rows", "16"), "rows"));
    cfg.cols = static_cast<int>(to_int(kv.take("cols", "16"), "cols"));
    cfg.theta_true = to_real(kv.take("theta_true", "0.4"), "theta_true");
    cfg.prior_sd = to_real(kv.take("prior_sd", "5.0"), "prior_sd");
    cfg.data_file = kv.take("data", "");
    cfg.gen_burn_in = static_cast<int>(to_int(kv.take("gen_burn_in", "20000"), "gen_burn_in"));
    cfg.sim_burn_in = static_cast<int>(to_int(kv.take("sim_burn_in", "1000"), "sim_burn_in"));
    cfg.sim_lag = static_cast<int>(to_int(kv.take("sim_lag", "500"), "sim_lag"));
    if (kv.has("oracle_grid")) {
        const std::string g = kv.take("oracle_grid", "");
        std::stringstream ss(g);
        std::string lo, hi, n;
        if (!std::getline(ss, lo, ':') || !std::getline(ss, hi, ':') || !std::getline(ss, n))
            throw std::invalid_argument("config: oracle_grid expects lo:hi:n");
        cfg.oracle_lo = to_real(lo, "oracle_grid");
        cfg.oracle_hi = to_real(hi, "oracle_grid");
        cfg.oracle_n = static_cast<int>(to_int(n, "oracle_grid"));
    }

    cfg.n_nodes = static_cast<int>(to_int(kv.take("n_nodes", "16"), "n_nodes"));
    cfg.ergm_theta1_true = to_real(kv.take("ergm_theta1_true", "-1.0"), "ergm_theta1_true");
    cfg.ergm_theta2_true = to_real(kv.take("ergm_theta2_true", "0.1"), "ergm_theta2_true");

    cfg.n_obs = static_cast<int>(to_int(kv.take("n_obs", "10"), "n_obs"));
    cfg.t_end = to_real(kv.take("t_end", "20.0"), "t_end");
    cfg.n_latent = static_cast<int>(to_int(kv.take("n_latent", "5"), "n_latent"));
    cfg.population = to_real(kv.take("population", "1000"), "population");
    cfg.x0_s = to_real(kv.take("x0_s", "0.99"), "x0_s");
    cfg.x0_i = to_real(kv.take("x0_i", "0.01"), "x0_i");
    cfg.inner_sweeps = static_cast<int>(to_int(kv.take("inner_sweeps", "50"), "inner_sweeps"));
    cfg.refresh_sweeps =
        static_cast<int>(to_int(kv.take("refresh_sweeps", "2"), "refresh_sweeps"));
    cfg.prior_shape = to_real(kv.take("prior_shape", "2.0"), "prior_shape");
    cfg.prior_scale = to_real(kv.take("prior_scale", "2.0"), "prior_scale");
    cfg.sir_theta1_true = to_real(kv.take("sir_theta1_true", "0.5"), "sir_theta1_true");
    cfg.sir_theta2_true = to_real(kv.take("sir_theta2_true", "0.25"), "sir_theta2_true");

    cfg.K0_grid.clear();
    for (const auto& s : split_list(kv.take("K0", "1,2,4,8")))
        cfg.K0_grid.push_back(static_cast<int>(to_int(s, "K0")));
    cfg.cost_budget = to_real(kv.take("cost_budget", "1.0"), "cost_budget");
    cfg.rho_inf = to_real(kv.take("rho_inf", "0"), "rho_inf");
    cfg.C = to_real(kv.take("C", "0"), "C");
    cfg.K_max_factor = static_cast<int>(to_int(kv.take("K_max_factor", "4"), "K_max_factor"));

    kv.finish();
    cfg.validate();
    return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("parse_config_file: cannot open " + path);
    return parse_config(in);
}

void ExperimentConfig::validate() const {
    static const char* known[] = {"exponential", "ising",      "ergm",
                                  "sir",         "rho-curve",  "k-allocation"};
    if (std::find(std::begin(known), std::end(known), experiment) == std::end(known))
        throw std::invalid_argument("config: unrecognised experiment '" + experiment + "'");
    if (replicates < 1) throw std::invalid_argument("config: replicates must be >= 1");
    if (thinning < 1) throw std::invalid_argument("config: thinning must be >= 1");
    for (auto i : I_grid)
        if (i < 1) throw std::invalid_argument("config: I entries must be positive");
    for (auto k : K_grid)
        if (k < 1) throw std::invalid_argument("config: K entries must be positive");
    for (auto d : degrees)
        if (d < 1 || d > 3) throw std::invalid_argument("config: degree entries must be 1..3");
    for (auto k : K0_grid)
        if (k < 1) throw std::invalid_argument("config: K0 entries must be positive");

    const bool sampling = experiment != "k-allocation";
    if (sampling && (I_grid.empty() || K_grid.empty() || degrees.empty()))
        throw std::invalid_argument("config: I, K and degree are required");
    if (experiment == "ising" && (rows < 2 || cols < 2))
        throw std::invalid_argument("config: ising lattice must be at least 2x2");
    if (experiment == "ergm" && n_nodes < 3)
        throw std::invalid_argument("config: ergm needs n_nodes >= 3");
    if (experiment == "sir" && (n_obs < 2 || n_latent < 0 || !(t_end > 0)))
        throw std::invalid_argument("config: bad sir geometry");
    if (!(cost_budget > 0)) throw std::invalid_argument("config: cost_budget must be positive");
    if (K_max_factor < 1) throw std::invalid_argument("config: K_max_factor must be >= 1");
}

}  // namespace rvcv::experiments
