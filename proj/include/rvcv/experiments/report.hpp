#pragma once

#include <Eigen/Core>

#include <string>
#include <vector>

#include "rvcv/experiments/config.hpp"
#include "rvcv/rho_curve.hpp"

namespace rvcv::experiments {

/// One report row per (I, K, degree, target function). The target index
/// selects g(theta) = theta_j. Statistical columns are aggregated over
/// replicates; R, rho and phi come from the first replicate so that the
/// identity 1/R = 1 - rho^2 holds exactly within a row.
struct ReportRow {
    std::int64_t I = 0;
    int K = 0;
    int degree = 0;
    int target = 0;
    double mu_uncontrolled = 0.0;
    double mu_controlled = 0.0;
    double std_mu_uncontrolled = 0.0;
    double std_mu_controlled = 0.0;
    double se_std_mu_controlled = 0.0;
    double R = 0.0;
    double rho = 0.0;
    double rho_mean_abs = 0.0;  ///< |rho| averaged over replicates (fit input)
    double sqrtIK_std_mu = 0.0;
    int replicates = 0;
    double acceptance = 0.0;
    Eigen::VectorXd phi;
    double runtime_s = 0.0;
};

struct AllocationRow {
    int K0 = 0;
    std::int64_t argmin_K = 0;
    double r_min = 0.0;
};

struct ExperimentReport {
    std::string experiment;
    std::vector<ReportRow> rows;
    bool has_fit = false;
    RhoCurveFit fit;
    bool has_oracle = false;
    double oracle_mean = 0.0;
    std::vector<AllocationRow> allocation;
    std::string data_note;
};

/// report.tsv: the statistical table, byte-for-byte reproducible given
/// (config, master seed); runtimes go to timings.tsv instead so wall-clock
/// noise never touches the deterministic outputs. summary.json carries the
/// full machine-readable record (also runtime-free).
void write_report_table(const std::string& path, const ExperimentReport& report);
void write_timings(const std::string& path, const ExperimentReport& report);
void write_summary_json(const std::string& path, const ExperimentReport& report,
                        const ExperimentConfig& config);

}  // namespace rvcv::experiments
