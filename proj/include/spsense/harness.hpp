#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "spsense/analysis.hpp"
#include "spsense/filters.hpp"
#include "spsense/model.hpp"

namespace spsense {

enum class Solver { RzaNlmf, Nlmf, Omp, Bpdn };

const char* solver_name(Solver s);
Solver solver_from_name(const std::string& name);
bool solver_is_adaptive(Solver s);

/// Declarative Monte Carlo experiment: cartesian product of
/// (solver, k, snr_db, epsilon) points, each averaged over `trials`
/// seeded trials.
struct ExperimentConfig {
    int n_dim = 40;
    int m_meas = 20;
    std::vector<int> k_list = {2, 6, 10};
    std::vector<double> snr_list = {0, 2, 4, 6, 8, 10, 12};
    std::vector<double> epsilon_list = {2000.0};
    int trials = 100;
    std::uint64_t seed = 1;
    std::vector<Solver> solvers = {Solver::RzaNlmf, Solver::Nlmf, Solver::Omp, Solver::Bpdn};
    double mu_iss = 1.5;
    double lambda_ass = 5e-8;
    double zeta = 0.0;
    std::int64_t n_max = 20000;
    double sigma_sq = 1.0;
    std::string out;
    bool decimate = true;   // keep every 50th iteration (plus the last) in CSV
    int workers = 1;

    void validate() const;
};

// Flat "key = value" file; lists comma separated; '#' starts a comment.
// Unknown keys raise std::invalid_argument.
ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig parse_config_file(const std::string& path);

/// Averaged MSE of one config point. Every curve carries enough metadata
/// to be rerun in isolation.
struct MseCurve {
    Solver solver = Solver::RzaNlmf;
    int k = 0;
    double snr_db = 0.0;
    double epsilon = 0.0;
    int trial_count = 0;
    std::uint64_t seed = 0;
    std::vector<std::int64_t> iterations;  // batch solvers use the single index -1
    std::vector<double> mse;
    int failed_trials = 0;

    double final_mse() const { return mse.back(); }
};

struct TrialPoint {
    Solver solver = Solver::RzaNlmf;
    int k = 2;
    double snr_db = 10.0;
    double epsilon = 2000.0;
};

struct TrialResult {
    bool diverged = false;
    std::int64_t diverged_at = -1;
    std::vector<double> mse_trace;  // adaptive solvers; index 0 is the zero estimate
    double final_mse = 0.0;
};

// Data seed of one trial. Depends on (root, k, snr_db, trial index) only,
// so all solvers and all epsilon values see identical (h, X, z) draws.
std::uint64_t trial_data_seed(std::uint64_t root, int k, double snr_db, int trial_index);

/// Generates fresh (h, X, z) from the trial seed and runs one solver.
/// Pure function of its arguments; a diverged adaptive run is reported,
/// not thrown.
TrialResult run_trial(const ExperimentConfig& cfg, const TrialPoint& pt,
                      std::uint64_t trial_seed);

/// Full cartesian sweep. Trials run `workers` at a time and are reduced
/// in trial order, so results are identical for any worker count. Writes
/// curves to cfg.out (if set), failing before computation if the path is
/// unwritable.
std::vector<MseCurve> run_sweep(const ExperimentConfig& cfg);

void write_curves_csv(std::ostream& os, const std::vector<MseCurve>& curves, bool decimate);
std::vector<MseCurve> read_curves_csv(std::istream& is);

struct CrlbBound {
    int k = 0;
    double snr_db = 0.0;
    double sigma_n_sq = 0.0;
    double crlb_nss = 0.0;
    double crlb_ass = 0.0;
    bool ass_valid = false;
    bool ass_singular = false;  // closed form undefined at this point
};

// One bound row per (k, snr) in the config grid; rho is derived from the
// first epsilon in the config.
std::vector<CrlbBound> compute_bounds(const ExperimentConfig& cfg);

struct ComparisonRow {
    int k = 0;
    double snr_db = 0.0;
    Solver solver = Solver::RzaNlmf;
    double epsilon = 0.0;
    double final_mse = 0.0;
    double crlb_nss = 0.0;
    double crlb_ass = 0.0;
    bool crlb_ass_valid = false;
};

/// Joins final curve MSE with the bound table on (k, snr_db). Curves whose
/// key has no bound raise std::invalid_argument listing the missing keys.
std::vector<ComparisonRow> compare_with_bounds(const std::vector<MseCurve>& curves,
                                               const std::vector<CrlbBound>& bounds);

} // namespace spsense
