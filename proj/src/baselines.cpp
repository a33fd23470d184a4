#include "spsense/baselines.hpp"

#include <cmath>
#include <stdexcept>

#include "spsense/errors.hpp"

namespace spsense {

void BpdnConfig::validate() const {
    if (lambda_nss < 0.0) throw std::invalid_argument("BpdnConfig: lambda_nss must be >= 0");
    if (max_iters < 1) throw std::invalid_argument("BpdnConfig: max_iters must be >= 1");
    if (tolerance < 0.0) throw std::invalid_argument("BpdnConfig: tolerance must be >= 0");
}

double default_bpdn_lambda(double sigma_n, int n_dim) {
    return sigma_n * std::sqrt(2.0 * std::log(static_cast<double>(n_dim)));
}

namespace {

// Largest eigenvalue of X^T X by power iteration with a fixed start, so
// the solver stays deterministic.
double operator_norm_sq(const Eigen::MatrixXd& x) {
    const int n = static_cast<int>(x.cols());
    Eigen::VectorXd v = Eigen::VectorXd::Ones(n) / std::sqrt(static_cast<double>(n));
    double lambda = 0.0;
    for (int it = 0; it < 200; ++it) {
        Eigen::VectorXd w = x.transpose() * (x * v);
        const double norm = w.norm();
        if (norm == 0.0) return 0.0;
        w /= norm;
        const double next = w.dot(x.transpose() * (x * w));
        if (it > 10 && std::abs(next - lambda) <= 1e-13 * std::abs(next)) return next;
        lambda = next;
        v = w;
    }
    return lambda;
}

inline double soft_threshold(double v, double t) {
    if (v > t) return v - t;
    if (v < -t) return v + t;
    return 0.0;
}

} // namespace

BpdnResult bpdn_solve(const SensingEnsemble& ensemble, const MeasurementSet& y,
                      const BpdnConfig& cfg) {
    cfg.validate();
    const Eigen::MatrixXd& x = ensemble.matrix;
    if (y.size() != ensemble.m_rows)
        throw ShapeError("bpdn_solve: measurement count != ensemble rows");
    if (!x.allFinite() || !y.observations.allFinite())
        throw std::invalid_argument("bpdn_solve: non-finite inputs");

    const double lip = operator_norm_sq(x) * 1.01;
    if (lip <= 0.0) throw DegenerateInputError("bpdn_solve: zero operator");
    const double step = 1.0 / lip;

    BpdnResult res;
    res.estimate = Eigen::VectorXd::Zero(x.cols());
    res.objectives.reserve(256);

    Eigen::VectorXd residual = x * res.estimate - y.observations;
    double obj_prev = std::numeric_limits<double>::infinity();
    for (int it = 0; it < cfg.max_iters; ++it) {
        const Eigen::VectorXd grad = x.transpose() * residual;
        Eigen::VectorXd v = res.estimate - step * grad;
        for (Eigen::Index i = 0; i < v.size(); ++i)
            v[i] = soft_threshold(v[i], step * cfg.lambda_nss);
        res.estimate = std::move(v);
        residual = x * res.estimate - y.observations;
        const double obj =
            0.5 * residual.squaredNorm() + cfg.lambda_nss * res.estimate.lpNorm<1>();
        res.objectives.push_back(obj);
        if (std::abs(obj_prev - obj) <= cfg.tolerance * std::max(1.0, std::abs(obj))) {
            res.converged = true;
            break;
        }
        obj_prev = obj;
    }
    return res;
}

void OmpConfig::validate(int m_rows, int n_dim) const {
    if (k_target < 1 || k_target > std::min(m_rows, n_dim))
        throw std::invalid_argument("OmpConfig: require 1 <= k_target <= min(M, N)");
    if (residual_tol < 0.0) throw std::invalid_argument("OmpConfig: residual_tol must be >= 0");
}

std::pair<Eigen::VectorXd, bool> least_squares_on_support(const Eigen::MatrixXd& x,
                                                          const Eigen::VectorXd& y,
                                                          const std::vector<int>& support) {
    Eigen::MatrixXd sub(x.rows(), static_cast<Eigen::Index>(support.size()));
    for (std::size_t j = 0; j < support.size(); ++j) sub.col(j) = x.col(support[j]);
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(sub);
    const bool deficient = cod.rank() < static_cast<Eigen::Index>(support.size());
    return {cod.solve(y), deficient};
}

OmpResult omp_solve(const SensingEnsemble& ensemble, const MeasurementSet& y,
                    const OmpConfig& cfg) {
    const Eigen::MatrixXd& x = ensemble.matrix;
    cfg.validate(ensemble.m_rows, ensemble.cols());
    if (y.size() != ensemble.m_rows)
        throw ShapeError("omp_solve: measurement count != ensemble rows");

    const int n = ensemble.cols();
    Eigen::VectorXd col_norms(n);
    for (int j = 0; j < n; ++j) col_norms[j] = x.col(j).norm();

    OmpResult res;
    res.estimate = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd residual = y.observations;
    Eigen::VectorXd coeffs;

    for (int step = 0; step < cfg.k_target; ++step) {
        if (residual.norm() <= cfg.residual_tol) break;

        // Best atom by normalized correlation, skipping already-selected ones.
        int best = -1;
        double best_corr = 0.0;
        for (int j = 0; j < n; ++j) {
            bool taken = false;
            for (int s : res.support) taken = taken || (s == j);
            if (taken || col_norms[j] == 0.0) continue;
            const double corr = std::abs(x.col(j).dot(residual)) / col_norms[j];
            if (corr > best_corr) {
                best_corr = corr;
                best = j;
            }
        }
        if (best < 0 || best_corr == 0.0) break;  // residual orthogonal to all atoms

        res.support.push_back(best);
        auto [c, deficient] = least_squares_on_support(x, y.observations, res.support);
        coeffs = std::move(c);
        res.rank_deficient = res.rank_deficient || deficient;

        residual = y.observations;
        for (std::size_t j = 0; j < res.support.size(); ++j)
            residual -= coeffs[static_cast<Eigen::Index>(j)] * x.col(res.support[j]);

        double max_corr = 0.0;
        for (int s : res.support)
            max_corr = std::max(max_corr, std::abs(x.col(s).dot(residual)));
        res.refit_max_corr.push_back(max_corr);
    }

    for (std::size_t j = 0; j < res.support.size(); ++j)
        res.estimate[res.support[j]] = coeffs[static_cast<Eigen::Index>(j)];
    res.residual_norm = residual.norm();
    return res;
}

} // namespace spsense
