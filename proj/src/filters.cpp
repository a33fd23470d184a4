#include "spsense/filters.hpp"

#include <cmath>
#include <stdexcept>

namespace spsense {

void FilterParams::validate() const {
    if (mu_iss <= 0.0) throw std::invalid_argument("FilterParams: mu_iss must be positive");
    if (lambda_ass < 0.0) throw std::invalid_argument("FilterParams: lambda_ass must be >= 0");
    if (epsilon <= 0.0) throw std::invalid_argument("FilterParams: epsilon must be positive");
    if (rho < 0.0) throw std::invalid_argument("FilterParams: rho must be >= 0");
    if (zeta < 0.0) throw std::invalid_argument("FilterParams: zeta must be >= 0");
    if (n_max < 1) throw std::invalid_argument("FilterParams: n_max must be >= 1");
}

double prediction_error(const FilterState& state, const Eigen::VectorXd& x_m, double y_m) {
    if (x_m.size() != state.estimate.size())
        throw ShapeError("prediction_error: row length != estimate length");
    return y_m - x_m.dot(state.estimate);
}

namespace {

// e^2/(xn2 + e^2) < 1 holds in exact arithmetic but saturates to 1 in
// floating point once e^2 swamps xn2; the strict upper bound is part of
// the contract, so nudge down in that case.
inline double step_size_from(double mu_iss, double xn2, double e) {
    const double mu = mu_iss * e * e / (xn2 + e * e);
    return mu < mu_iss ? mu : std::nextafter(mu_iss, 0.0);
}

} // namespace

double variable_step_size(const FilterParams& params, const Eigen::VectorXd& x_m, double e) {
    const double xn2 = x_m.squaredNorm();
    if (xn2 == 0.0) throw DegenerateInputError("variable_step_size: zero sensing row");
    return step_size_from(params.mu_iss, xn2, e);
}

Eigen::VectorXd zero_attractor(const Eigen::VectorXd& estimate, double rho, double epsilon) {
    Eigen::VectorXd out(estimate.size());
    for (Eigen::Index i = 0; i < estimate.size(); ++i) {
        const double h = estimate[i];
        const double sgn = (h > 0.0) - (h < 0.0);
        out[i] = rho * sgn / (1.0 + epsilon * std::abs(h));
    }
    return out;
}

namespace {

// Shared update core. Both Eq.-form gradient expressions are the same
// quantity; the mu_ass form is evaluated here.
void update_in_place(FilterState& state, const FilterParams& params,
                     const Eigen::VectorXd& x_m, double y_m, double rho) {
    if (x_m.size() != state.estimate.size())
        throw ShapeError("filter update: row length != estimate length");
    const double xn2 = x_m.squaredNorm();
    if (xn2 == 0.0) throw DegenerateInputError("filter update: zero sensing row");

    const double e = y_m - x_m.dot(state.estimate);
    const double mu_ass = step_size_from(params.mu_iss, xn2, e);
    const double gain = mu_ass * e / xn2;

    const double eps = params.epsilon;
    for (Eigen::Index i = 0; i < state.estimate.size(); ++i) {
        const double h = state.estimate[i];
        const double sgn = (h > 0.0) - (h < 0.0);
        state.estimate[i] = h + gain * x_m[i] - rho * sgn / (1.0 + eps * std::abs(h));
    }
    state.iteration += 1;
    state.last_error = e;
    state.last_step = mu_ass;
}

} // namespace

FilterState rza_nlmf_update(const FilterState& state, const FilterParams& params,
                            const Eigen::VectorXd& x_m, double y_m) {
    FilterState next = state;
    update_in_place(next, params, x_m, y_m, params.rho);
    return next;
}

FilterState nlmf_update(const FilterState& state, const FilterParams& params,
                        const Eigen::VectorXd& x_m, double y_m) {
    FilterState next = state;
    update_in_place(next, params, x_m, y_m, 0.0);
    return next;
}

AssResult run_ass(const MeasurementSet& measurements, const SensingEnsemble& ensemble,
                  const FilterParams& params, const SparseSignal* truth) {
    params.validate();
    const int m_rows = ensemble.m_rows;
    const int n = ensemble.cols();
    if (measurements.size() == 0)
        throw std::invalid_argument("run_ass: empty measurement set");
    if (measurements.size() != m_rows)
        throw ShapeError("run_ass: measurement count != ensemble rows");
    if (truth && truth->dim() != n)
        throw ShapeError("run_ass: truth length != ensemble columns");

    AssResult res{FilterState(n), {}};
    Eigen::VectorXd prev = res.state.estimate;

    if (truth) {
        res.mse.reserve(static_cast<std::size_t>(params.n_max) + 1);
        res.mse.push_back(truth->coefficients.squaredNorm());  // h~(0) = 0
    }

    for (std::int64_t iter = 0; iter < params.n_max; ++iter) {
        const int m = row_for_iteration(iter, m_rows);
        prev = res.state.estimate;
        update_in_place(res.state, params, ensemble.matrix.row(m).transpose(),
                        measurements.observations[m], params.rho);
        if (!std::isfinite(res.state.last_error))
            throw DivergenceError(res.state.iteration,
                                  "run_ass: non-finite error signal at iteration " +
                                      std::to_string(res.state.iteration));
        if (truth)
            res.mse.push_back((truth->coefficients - res.state.estimate).squaredNorm());
        if ((res.state.estimate - prev).norm() < params.zeta) break;
    }

    if (!res.state.estimate.allFinite())
        throw DivergenceError(res.state.iteration, "run_ass: non-finite estimate");
    return res;
}

} // namespace spsense
