#include <doctest.h>

#include <cmath>

#include "spsense/baselines.hpp"
#include "spsense/errors.hpp"
#include "spsense/model.hpp"

using namespace spsense;

namespace {

SensingEnsemble identity_ensemble(int n) {
    SensingEnsemble ens;
    ens.matrix = Eigen::MatrixXd::Identity(n, n);
    ens.m_rows = n;
    ens.row_variance = 1.0;
    return ens;
}

MeasurementSet wrap(const Eigen::VectorXd& y) {
    MeasurementSet ms;
    ms.observations = y;
    return ms;
}

double soft(double v, double t) { return std::copysign(std::max(std::abs(v) - t, 0.0), v); }

} // namespace

TEST_CASE("bpdn: identity system with lambda = 0 returns y") {
    const SensingEnsemble ens = identity_ensemble(6);
    Eigen::VectorXd y(6);
    y << 1.0, -2.0, 0.5, 0.0, 3.0, -0.25;
    BpdnConfig cfg;
    cfg.lambda_nss = 0.0;
    cfg.tolerance = 0.0;  // run all iterations; the iterate contracts to y exactly
    cfg.max_iters = 2000;
    const BpdnResult res = bpdn_solve(ens, wrap(y), cfg);
    CHECK((res.estimate - y).lpNorm<Eigen::Infinity>() == 0.0);
}

TEST_CASE("bpdn: identity system soft-thresholds y by lambda") {
    const SensingEnsemble ens = identity_ensemble(5);
    Eigen::VectorXd y(5);
    y << 2.0, -1.5, 0.3, -0.1, 0.75;
    BpdnConfig cfg;
    cfg.lambda_nss = 0.5;
    cfg.tolerance = 0.0;
    cfg.max_iters = 2000;
    const BpdnResult res = bpdn_solve(ens, wrap(y), cfg);
    for (int i = 0; i < 5; ++i)
        CHECK(res.estimate[i] == doctest::Approx(soft(y[i], 0.5)).epsilon(1e-8));
}

TEST_CASE("bpdn: lambda above the dual norm gives the zero vector exactly") {
    Rng rng = make_rng(51);
    const SensingEnsemble ens = generate_sensing_matrix(10, 25, 1.0, rng);
    const SparseSignal sig = generate_sparse_signal(25, 3, rng);
    Rng nrng = make_rng(52);
    const MeasurementSet ms = measure(sig, ens, NoiseModel::with_variance(0.01), nrng);

    const double dual = (ens.matrix.transpose() * ms.observations).lpNorm<Eigen::Infinity>();
    BpdnConfig cfg;
    cfg.lambda_nss = dual * 1.001;
    const BpdnResult res = bpdn_solve(ens, ms, cfg);
    CHECK(res.estimate.isZero(0.0));
}

TEST_CASE("bpdn: objective is non-increasing") {
    Rng rng = make_rng(53);
    const SensingEnsemble ens = generate_sensing_matrix(20, 40, 1.0, rng);
    const SparseSignal sig = generate_sparse_signal(40, 4, rng);
    Rng nrng = make_rng(54);
    const MeasurementSet ms = measure(sig, ens, NoiseModel::from_snr_db(10.0), nrng);

    BpdnConfig cfg;
    cfg.lambda_nss = default_bpdn_lambda(std::sqrt(ms.sigma_n_sq), 40);
    const BpdnResult res = bpdn_solve(ens, ms, cfg);
    for (std::size_t i = 1; i < res.objectives.size(); ++i)
        CHECK(res.objectives[i] <= res.objectives[i - 1] + 1e-12);
}

TEST_CASE("bpdn: subgradient optimality conditions at convergence") {
    for (std::uint64_t seed : {61ull, 62ull, 63ull, 64ull, 65ull}) {
        Rng rng = make_rng(seed);
        const SensingEnsemble ens = generate_sensing_matrix(20, 40, 1.0, rng);
        const SparseSignal sig = generate_sparse_signal(40, 3, rng);
        Rng nrng = make_rng(seed + 1000);
        const MeasurementSet ms = measure(sig, ens, NoiseModel::from_snr_db(10.0), nrng);

        BpdnConfig cfg;
        cfg.lambda_nss = default_bpdn_lambda(std::sqrt(ms.sigma_n_sq), 40);
        cfg.max_iters = 50000;
        cfg.tolerance = 1e-14;
        const BpdnResult res = bpdn_solve(ens, ms, cfg);
        REQUIRE(res.converged);

        const Eigen::VectorXd corr =
            ens.matrix.transpose() * (ms.observations - ens.matrix * res.estimate);
        for (int i = 0; i < 40; ++i) {
            if (res.estimate[i] == 0.0) {
                CHECK(std::abs(corr[i]) <= cfg.lambda_nss * (1.0 + 1e-3));
            } else {
                const double want = cfg.lambda_nss * (res.estimate[i] > 0 ? 1.0 : -1.0);
                CHECK(corr[i] == doctest::Approx(want).epsilon(1e-3));
            }
        }
    }
}

TEST_CASE("bpdn: non-finite inputs rejected, bad config rejected") {
    const SensingEnsemble ens = identity_ensemble(3);
    Eigen::VectorXd y(3);
    y << 1.0, std::nan(""), 0.0;
    CHECK_THROWS_AS(bpdn_solve(ens, wrap(y), BpdnConfig{}), std::invalid_argument);

    BpdnConfig bad;
    bad.lambda_nss = -1.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = BpdnConfig{};
    bad.max_iters = 0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("bpdn: deterministic across calls") {
    Rng rng = make_rng(55);
    const SensingEnsemble ens = generate_sensing_matrix(15, 30, 1.0, rng);
    const SparseSignal sig = generate_sparse_signal(30, 3, rng);
    Rng nrng = make_rng(56);
    const MeasurementSet ms = measure(sig, ens, NoiseModel::from_snr_db(5.0), nrng);
    BpdnConfig cfg;
    cfg.lambda_nss = 0.7;
    const BpdnResult a = bpdn_solve(ens, ms, cfg);
    const BpdnResult b = bpdn_solve(ens, ms, cfg);
    CHECK(a.estimate == b.estimate);
}

TEST_CASE("omp: noiseless single atom recovered exactly") {
    Rng rng = make_rng(71);
    const SensingEnsemble ens = generate_sensing_matrix(20, 40, 1.0, rng);
    const SparseSignal sig = generate_sparse_signal(40, 1, rng);
    Rng nrng = make_rng(72);
    const MeasurementSet ms = measure(sig, ens, NoiseModel::with_variance(0.0), nrng);

    OmpConfig cfg;
    cfg.k_target = 1;
    const OmpResult res = omp_solve(ens, ms, cfg);
    REQUIRE(res.support.size() == 1);
    CHECK(res.support[0] == sig.support[0]);
    CHECK(res.residual_norm < 1e-10 * ms.observations.norm());
    CHECK((res.estimate - sig.coefficients).lpNorm<Eigen::Infinity>() < 1e-12);
}

TEST_CASE("omp: zero observations stop immediately") {
    Rng rng = make_rng(73);
    const SensingEnsemble ens = generate_sensing_matrix(10, 20, 1.0, rng);
    OmpConfig cfg;
    cfg.k_target = 3;
    const OmpResult res = omp_solve(ens, wrap(Eigen::VectorXd::Zero(10)), cfg);
    CHECK(res.support.empty());
    CHECK(res.estimate.isZero(0.0));
}

TEST_CASE("omp: residual orthogonal to the selected atoms after each refit") {
    Rng rng = make_rng(74);
    const SensingEnsemble ens = generate_sensing_matrix(20, 40, 1.0, rng);
    const SparseSignal sig = generate_sparse_signal(40, 4, rng);
    Rng nrng = make_rng(75);
    const MeasurementSet ms = measure(sig, ens, NoiseModel::from_snr_db(10.0), nrng);

    OmpConfig cfg;
    cfg.k_target = 4;
    const OmpResult res = omp_solve(ens, ms, cfg);
    REQUIRE(res.refit_max_corr.size() == res.support.size());
    for (double c : res.refit_max_corr) CHECK(c < 1e-9 * ms.observations.norm());
}

TEST_CASE("omp: noiseless K=2 exact support recovery rate") {
    int hits = 0;
    const int trials = 200;
    for (int t = 0; t < trials; ++t) {
        Rng rng = make_rng(9000 + t);
        const SparseSignal sig = generate_sparse_signal(40, 2, rng);
        Rng mrng = make_rng(derive_seed(9000 + t, 2));
        const SensingEnsemble ens = generate_sensing_matrix(20, 40, 1.0, mrng);
        Rng nrng = make_rng(derive_seed(9000 + t, 3));
        const MeasurementSet ms = measure(sig, ens, NoiseModel::with_variance(0.0), nrng);

        OmpConfig cfg;
        cfg.k_target = 2;
        OmpResult res = omp_solve(ens, ms, cfg);
        std::sort(res.support.begin(), res.support.end());
        if (res.support == sig.support) ++hits;
    }
    CHECK(hits >= trials * 95 / 100);
}

TEST_CASE("omp: k_target bounds enforced") {
    Rng rng = make_rng(76);
    const SensingEnsemble ens = generate_sensing_matrix(10, 20, 1.0, rng);
    const MeasurementSet ms = wrap(Eigen::VectorXd::Ones(10));
    OmpConfig cfg;
    cfg.k_target = 11;  // exceeds M
    CHECK_THROWS_AS(omp_solve(ens, ms, cfg), std::invalid_argument);
    cfg.k_target = 0;
    CHECK_THROWS_AS(omp_solve(ens, ms, cfg), std::invalid_argument);
}

TEST_CASE("least-squares refit flags rank deficiency and still solves") {
    Eigen::MatrixXd x(4, 3);
    x.col(0) << 1, 2, 3, 4;
    x.col(1) = 2.0 * x.col(0);  // parallel column
    x.col(2) << 0, 1, 0, -1;
    const Eigen::VectorXd y = 3.0 * x.col(0) + 0.5 * x.col(2);

    const auto [coeffs, deficient] = least_squares_on_support(x, y, {0, 1, 2});
    CHECK(deficient);
    // minimum-norm least-squares solution still reproduces y
    Eigen::VectorXd recon = Eigen::VectorXd::Zero(4);
    recon += coeffs[0] * x.col(0) + coeffs[1] * x.col(1) + coeffs[2] * x.col(2);
    CHECK((recon - y).norm() < 1e-10);

    const auto [c2, ok] = least_squares_on_support(x, y, {0, 2});
    CHECK_FALSE(ok);
    CHECK(c2[0] == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(c2[1] == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("default bpdn lambda follows the universal threshold") {
    CHECK(default_bpdn_lambda(0.5, 40) ==
          doctest::Approx(0.5 * std::sqrt(2.0 * std::log(40.0))).epsilon(1e-15));
    CHECK(default_bpdn_lambda(0.0, 40) == 0.0);
}
