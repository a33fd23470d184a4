#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "spsense/rng.hpp"

namespace spsense {

// K-sparse ground-truth vector. Nonzero entries are i.i.d. zero-mean
// Gaussian with variance 1/K so that E{||h||^2} = 1.
struct SparseSignal {
    Eigen::VectorXd coefficients;
    std::vector<int> support;   // sorted, distinct, size K

    int dim() const { return static_cast<int>(coefficients.size()); }
    int sparsity() const { return static_cast<int>(support.size()); }
};

// M x N sensing matrix with i.i.d. zero-mean Gaussian entries of
// variance row_variance. Rows are guaranteed nonzero.
struct SensingEnsemble {
    Eigen::MatrixXd matrix;
    double row_variance = 1.0;  // per-entry variance sigma^2
    int m_rows = 0;

    int cols() const { return static_cast<int>(matrix.cols()); }
};

struct NoiseModel {
    double sigma_n_sq = 0.0;
    double snr_db = 0.0;
    double es = 1.0;

    // sigma_n_sq = es * 10^(-snr_db/20), the output-SNR definition taken
    // literally (20 log10 of the power ratio, not the usual 10 log10).
    static NoiseModel from_snr_db(double snr_db, double es = 1.0);
    static NoiseModel with_variance(double sigma_n_sq);
};

struct MeasurementSet {
    Eigen::VectorXd observations;      // y = X h + z
    std::uint64_t noise_seed = 0;
    double sigma_n_sq = 0.0;

    int size() const { return static_cast<int>(observations.size()); }
};

SparseSignal generate_sparse_signal(int n, int k, Rng& rng);
SensingEnsemble generate_sensing_matrix(int m, int n, double sigma_sq, Rng& rng);

// es * 10^(-snr_db/20); all real snr_db valid (snr_db = inf gives 0).
double snr_to_noise_variance(double snr_db, double es = 1.0);

MeasurementSet measure(const SparseSignal& signal, const SensingEnsemble& ensemble,
                       const NoiseModel& noise, Rng& rng);

} // namespace spsense
