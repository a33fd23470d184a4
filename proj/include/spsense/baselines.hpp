#pragma once

#include <Eigen/Dense>
#include <vector>

#include "spsense/model.hpp"

namespace spsense {

struct BpdnConfig {
    double lambda_nss = 0.0;    // l1 weight; 0 degenerates to least squares
    int max_iters = 20000;
    double tolerance = 1e-12;   // relative objective-change stop

    void validate() const;
};

// Universal-threshold default: sigma_n * sqrt(2 ln N).
double default_bpdn_lambda(double sigma_n, int n_dim);

struct BpdnResult {
    Eigen::VectorXd estimate;
    std::vector<double> objectives;  // one entry per iteration, non-increasing
    bool converged = false;
};

/// Proximal-gradient (ISTA) solver for 0.5||y - Xh||^2 + lambda ||h||_1.
/// Step size 1/L with L the largest eigenvalue of X^T X from power
/// iteration, inflated 1% so the descent property holds.
BpdnResult bpdn_solve(const SensingEnsemble& ensemble, const MeasurementSet& y,
                      const BpdnConfig& cfg);

struct OmpConfig {
    int k_target = 1;
    double residual_tol = 0.0;  // stop early when ||r|| <= residual_tol

    void validate(int m_rows, int n_dim) const;
};

struct OmpResult {
    Eigen::VectorXd estimate;
    std::vector<int> support;        // atoms in selection order
    double residual_norm = 0.0;
    bool rank_deficient = false;     // some refit hit a rank-deficient submatrix
    std::vector<double> refit_max_corr;  // max |<selected col, residual>| after each refit
};

/// Greedy pursuit: correlate residual with (norm-scaled) columns, add the
/// best atom, least-squares refit on the support, repeat.
OmpResult omp_solve(const SensingEnsemble& ensemble, const MeasurementSet& y,
                    const OmpConfig& cfg);

// Least-squares refit on a column subset; flags rank deficiency and then
// returns the minimum-norm solution.
std::pair<Eigen::VectorXd, bool> least_squares_on_support(const Eigen::MatrixXd& x,
                                                          const Eigen::VectorXd& y,
                                                          const std::vector<int>& support);

} // namespace spsense
