#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "spsense/errors.hpp"
#include "spsense/model.hpp"

namespace spsense {

/// Hyperparameters of the RZA-NLMF filter.
///
/// rho defaults to mu_iss * lambda_ass * epsilon, the value produced by
/// differentiating the log-sum penalty of the filter cost. It can be
/// overridden explicitly (set_rho) to study other couplings.
struct FilterParams {
    double mu_iss = 1.5;        // initial step-size
    double lambda_ass = 5e-8;   // sparsity regularization weight
    double epsilon = 2000.0;    // reweighted factor; ~1/epsilon is the attraction threshold
    double rho;                 // zero-attractor gain
    double zeta = 0.0;          // stop tolerance on ||h(n+1)-h(n)||; 0 = run to n_max
    std::int64_t n_max = 20000;

    FilterParams() : rho(mu_iss * lambda_ass * epsilon) {}
    FilterParams(double mu, double lambda, double eps, double zeta_ = 0.0,
                 std::int64_t n_max_ = 20000)
        : mu_iss(mu), lambda_ass(lambda), epsilon(eps),
          rho(mu * lambda * eps), zeta(zeta_), n_max(n_max_) {}

    FilterParams& set_rho(double r) { rho = r; return *this; }
    void validate() const;
};

/// Evolving estimate of the adaptive filter.
struct FilterState {
    Eigen::VectorXd estimate;   // h~(n)
    std::int64_t iteration = 0;
    double last_error = 0.0;    // e_m(n) of the most recent update
    double last_step = 0.0;     // mu_ass(n) of the most recent update

    explicit FilterState(int n) : estimate(Eigen::VectorXd::Zero(n)) {}
};

/// e_m(n) = y_m - <x_m, h~(n)>
double prediction_error(const FilterState& state, const Eigen::VectorXd& x_m, double y_m);

/// mu_ass(n) = mu_iss e^2 / (||x||^2 + e^2), strictly in [0, mu_iss).
double variable_step_size(const FilterParams& params, const Eigen::VectorXd& x_m, double e);

/// Elementwise rho * sgn(h_i) / (1 + epsilon |h_i|); sgn(0) = 0.
Eigen::VectorXd zero_attractor(const Eigen::VectorXd& estimate, double rho, double epsilon);

/// One update of h~: gradient term plus subtracted zero attractor, both
/// evaluated at the current estimate.
FilterState rza_nlmf_update(const FilterState& state, const FilterParams& params,
                            const Eigen::VectorXd& x_m, double y_m);

/// The update with the attractor removed (rho = 0).
FilterState nlmf_update(const FilterState& state, const FilterParams& params,
                        const Eigen::VectorXd& x_m, double y_m);

// Row replay order: iteration n consumes measurement row n mod M.
inline int row_for_iteration(std::int64_t n, int m_rows) {
    return static_cast<int>(n % m_rows);
}

struct AssResult {
    FilterState state;
    // ||h - h~(n)||^2 for n = 0..iterations_run; empty when no truth given.
    std::vector<double> mse;
};

/// Full adaptive run: h~(0) = 0, rows replayed cyclically, stop on
/// ||h~(n+1) - h~(n)|| < zeta or after n_max updates. Throws
/// DivergenceError if the error signal becomes non-finite.
AssResult run_ass(const MeasurementSet& measurements, const SensingEnsemble& ensemble,
                  const FilterParams& params, const SparseSignal* truth = nullptr);

} // namespace spsense
