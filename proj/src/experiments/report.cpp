#include "rvcv/experiments/report.hpp"

#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "rvcv/io_util.hpp"

namespace rvcv::experiments {

namespace {

std::ofstream open_or_throw(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("report: cannot open " + path);
    return out;
}

}  // namespace

void write_report_table(const std::string& path, const ExperimentReport& report) {
    auto out = open_or_throw(path);
    if (!report.allocation.empty()) {
        out << "K0\targmin_K\tr_min\n";
        for (const auto& row : report.allocation)
            out << row.K0 << '\t' << row.argmin_K << '\t' << format_double(row.r_min)
                << '\n';
        return;
    }
    out << "experiment\tI\tK\tdegree\ttarget\tmu_uncontrolled\tmu_controlled"
           "\tstd_mu_uncontrolled\tstd_mu_controlled\tse_std_mu_controlled"
           "\tR\trho\tsqrtIK_std_mu\treplicates\tacceptance\n";
    for (const auto& r : report.rows) {
        out << report.experiment << '\t' << r.I << '\t' << r.K << '\t' << r.degree << '\t'
            << "theta" << r.target + 1 << '\t' << format_double(r.mu_uncontrolled) << '\t'
            << format_double(r.mu_controlled) << '\t' << format_double(r.std_mu_uncontrolled)
            << '\t' << format_double(r.std_mu_controlled) << '\t'
            << format_double(r.se_std_mu_controlled) << '\t' << format_double(r.R) << '\t'
            << format_double(r.rho) << '\t' << format_double(r.sqrtIK_std_mu) << '\t'
            << r.replicates << '\t' << format_double(r.acceptance) << '\n';
    }
}

void write_timings(const std::string& path, const ExperimentReport& report) {
    auto out = open_or_throw(path);
    out << "I\tK\tdegree\ttarget\truntime_s\n";
    for (const auto& r : report.rows)
        out << r.I << '\t' << r.K << '\t' << r.degree << '\t' << "theta" << r.target + 1
            << '\t' << format_double(r.runtime_s) << '\n';
}

void write_summary_json(const std::string& path, const ExperimentReport& report,
                        const ExperimentConfig& config) {
    nlohmann::ordered_json j;
    j["experiment"] = report.experiment;
    j["seed"] = config.seed;
    j["replicates"] = config.replicates;
    if (!report.data_note.empty()) j["data"] = report.data_note;
    if (report.has_oracle) j["oracle_posterior_mean"] = report.oracle_mean;
    if (report.has_fit) {
        j["rho_curve_fit"] = {{"rho_inf", report.fit.rho_inf},
                              {"C", report.fit.C},
                              {"residual", report.fit.residual}};
    }
    if (!report.allocation.empty()) {
        auto rows = nlohmann::ordered_json::array();
        for (const auto& a : report.allocation)
            rows.push_back({{"K0", a.K0}, {"argmin_K", a.argmin_K}, {"r_min", a.r_min}});
        j["allocation"] = rows;
    }
    auto rows = nlohmann::ordered_json::array();
    for (const auto& r : report.rows) {
        nlohmann::ordered_json row;
        row["I"] = r.I;
        row["K"] = r.K;
        row["degree"] = r.degree;
        row["target"] = "theta" + std::to_string(r.target + 1);
        row["mu_uncontrolled"] = r.mu_uncontrolled;
        row["mu_controlled"] = r.mu_controlled;
        row["std_mu_uncontrolled"] = r.std_mu_uncontrolled;
        row["std_mu_controlled"] = r.std_mu_controlled;
        row["se_std_mu_controlled"] = r.se_std_mu_controlled;
        row["R"] = r.R;
        row["rho"] = r.rho;
        row["rho_mean_abs"] = r.rho_mean_abs;
        row["sqrtIK_std_mu"] = r.sqrtIK_std_mu;
        row["acceptance"] = r.acceptance;
        row["phi"] = std::vector<double>(r.phi.data(), r.phi.data() + r.phi.size());
        rows.push_back(std::move(row));
    }
    j["rows"] = rows;

    auto out = open_or_throw(path);
    out << j.dump(2) << '\n';
}

}  // namespace rvcv::experiments
