#include "spsense/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "spsense/errors.hpp"

namespace spsense {

NoiseModel NoiseModel::from_snr_db(double snr_db, double es) {
    if (es <= 0.0) throw std::invalid_argument("NoiseModel: es must be positive");
    NoiseModel nm;
    nm.snr_db = snr_db;
    nm.es = es;
    nm.sigma_n_sq = snr_to_noise_variance(snr_db, es);
    return nm;
}

NoiseModel NoiseModel::with_variance(double sigma_n_sq) {
    if (sigma_n_sq < 0.0) throw std::invalid_argument("NoiseModel: variance must be >= 0");
    NoiseModel nm;
    nm.sigma_n_sq = sigma_n_sq;
    // snr_db kept at the literal inverse of the mapping; infinite for 0.
    nm.snr_db = sigma_n_sq > 0.0 ? -20.0 * std::log10(sigma_n_sq)
                                 : std::numeric_limits<double>::infinity();
    return nm;
}

double snr_to_noise_variance(double snr_db, double es) {
    if (es <= 0.0) throw std::invalid_argument("snr_to_noise_variance: es must be positive");
    return es * std::pow(10.0, -snr_db / 20.0);
}

SparseSignal generate_sparse_signal(int n, int k, Rng& rng) {
    if (k <= 0 || k > n)
        throw std::invalid_argument("generate_sparse_signal: require 0 < k <= n");

    // Partial Fisher-Yates draw of k distinct positions.
    std::vector<int> idx(n);
    for (int i = 0; i < n; ++i) idx[i] = i;
    for (int i = 0; i < k; ++i) {
        std::uniform_int_distribution<int> pick(i, n - 1);
        std::swap(idx[i], idx[pick(rng)]);
    }
    std::vector<int> support(idx.begin(), idx.begin() + k);
    std::sort(support.begin(), support.end());

    SparseSignal sig;
    sig.coefficients = Eigen::VectorXd::Zero(n);
    sig.support = std::move(support);
    std::normal_distribution<double> gauss(0.0, std::sqrt(1.0 / k));
    for (int i : sig.support) sig.coefficients[i] = gauss(rng);
    return sig;
}

SensingEnsemble generate_sensing_matrix(int m, int n, double sigma_sq, Rng& rng) {
    if (m < 1 || n < 1)
        throw std::invalid_argument("generate_sensing_matrix: dimensions must be positive");
    if (sigma_sq <= 0.0)
        throw std::invalid_argument("generate_sensing_matrix: sigma_sq must be positive");

    SensingEnsemble ens;
    ens.matrix.resize(m, n);
    ens.row_variance = sigma_sq;
    ens.m_rows = m;
    std::normal_distribution<double> gauss(0.0, std::sqrt(sigma_sq));
    for (int r = 0; r < m; ++r) {
        do {
            for (int c = 0; c < n; ++c) ens.matrix(r, c) = gauss(rng);
        } while (ens.matrix.row(r).squaredNorm() == 0.0);  // measure-zero, redraw anyway
    }
    return ens;
}

MeasurementSet measure(const SparseSignal& signal, const SensingEnsemble& ensemble,
                       const NoiseModel& noise, Rng& rng) {
    if (ensemble.cols() != signal.dim())
        throw ShapeError("measure: ensemble columns != signal length");

    MeasurementSet ms;
    ms.sigma_n_sq = noise.sigma_n_sq;
    ms.observations = ensemble.matrix * signal.coefficients;
    if (noise.sigma_n_sq > 0.0) {
        std::normal_distribution<double> gauss(0.0, std::sqrt(noise.sigma_n_sq));
        for (int i = 0; i < ms.observations.size(); ++i) ms.observations[i] += gauss(rng);
    }
    return ms;
}

} // namespace spsense
