#include "spsense/harness.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "spsense/baselines.hpp"
#include "spsense/rng.hpp"

namespace spsense {

namespace {

constexpr std::int64_t kDecimationStride = 50;

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace

std::uint64_t trial_data_seed(std::uint64_t root, int k, double snr_db, int trial_index) {
    std::uint64_t s = derive_seed(root, static_cast<std::uint64_t>(k));
    s = derive_seed(s, std::bit_cast<std::uint64_t>(snr_db));
    return derive_seed(s, static_cast<std::uint64_t>(trial_index));
}

TrialResult run_trial(const ExperimentConfig& cfg, const TrialPoint& pt,
                      std::uint64_t trial_seed) {
    // Independent sub-streams so each component can be regenerated alone.
    Rng signal_rng = make_rng(derive_seed(trial_seed, 1));
    Rng matrix_rng = make_rng(derive_seed(trial_seed, 2));
    Rng noise_rng = make_rng(derive_seed(trial_seed, 3));

    const SparseSignal truth = generate_sparse_signal(cfg.n_dim, pt.k, signal_rng);
    const SensingEnsemble ensemble =
        generate_sensing_matrix(cfg.m_meas, cfg.n_dim, cfg.sigma_sq, matrix_rng);
    const NoiseModel noise = NoiseModel::from_snr_db(pt.snr_db);
    const MeasurementSet meas = measure(truth, ensemble, noise, noise_rng);

    TrialResult out;
    switch (pt.solver) {
        case Solver::RzaNlmf:
        case Solver::Nlmf: {
            FilterParams params(cfg.mu_iss, cfg.lambda_ass, pt.epsilon, cfg.zeta, cfg.n_max);
            if (pt.solver == Solver::Nlmf) params.set_rho(0.0);
            try {
                AssResult res = run_ass(meas, ensemble, params, &truth);
                out.mse_trace = std::move(res.mse);
                out.final_mse = out.mse_trace.back();
            } catch (const DivergenceError& e) {
                out.diverged = true;
                out.diverged_at = e.iteration;
            }
            break;
        }
        case Solver::Omp: {
            OmpConfig omp_cfg;
            omp_cfg.k_target = pt.k;  // oracle sparsity
            omp_cfg.residual_tol = 0.0;
            const OmpResult res = omp_solve(ensemble, meas, omp_cfg);
            out.final_mse = (truth.coefficients - res.estimate).squaredNorm();
            break;
        }
        case Solver::Bpdn: {
            BpdnConfig bpdn_cfg;
            bpdn_cfg.lambda_nss =
                default_bpdn_lambda(std::sqrt(noise.sigma_n_sq), cfg.n_dim);
            const BpdnResult res = bpdn_solve(ensemble, meas, bpdn_cfg);
            out.final_mse = (truth.coefficients - res.estimate).squaredNorm();
            break;
        }
    }
    return out;
}

namespace {

// Accumulates per-trial results strictly in trial order, so the floating
// point reduction is identical for every worker count. Traces that
// stopped early contribute their final value at later indices.
class CurveAccumulator {
public:
    void add(const TrialResult& r, bool adaptive) {
        if (r.diverged) {
            ++failed_;
            return;
        }
        ++successes_;
        if (!adaptive) {
            final_sum_ += r.final_mse;
            return;
        }
        const std::vector<double>& t = r.mse_trace;
        if (t.size() > sums_.size()) sums_.resize(t.size(), back_sum_);
        for (std::size_t j = 0; j < sums_.size(); ++j)
            sums_[j] += (j < t.size()) ? t[j] : t.back();
        back_sum_ += t.back();
    }

    MseCurve finish(const TrialPoint& pt, const ExperimentConfig& cfg, bool adaptive) const {
        if (successes_ == 0)
            throw std::runtime_error("run_sweep: every trial diverged for solver " +
                                     std::string(solver_name(pt.solver)));
        MseCurve c;
        c.solver = pt.solver;
        c.k = pt.k;
        c.snr_db = pt.snr_db;
        c.epsilon = pt.epsilon;
        c.trial_count = cfg.trials;
        c.seed = cfg.seed;
        c.failed_trials = failed_;
        if (adaptive) {
            c.iterations.resize(sums_.size());
            c.mse.resize(sums_.size());
            for (std::size_t j = 0; j < sums_.size(); ++j) {
                c.iterations[j] = static_cast<std::int64_t>(j);
                c.mse[j] = sums_[j] / successes_;
            }
        } else {
            c.iterations = {-1};
            c.mse = {final_sum_ / successes_};
        }
        return c;
    }

private:
    std::vector<double> sums_;
    double back_sum_ = 0.0;
    double final_sum_ = 0.0;
    int successes_ = 0;
    int failed_ = 0;
};

MseCurve run_point(const ExperimentConfig& cfg, const TrialPoint& pt) {
    const bool adaptive = solver_is_adaptive(pt.solver);
    CurveAccumulator acc;
    const int workers = std::max(1, cfg.workers);
    std::vector<TrialResult> chunk(workers);
    for (int base = 0; base < cfg.trials; base += workers) {
        const int count = std::min(workers, cfg.trials - base);
        if (count == 1) {
            chunk[0] = run_trial(cfg, pt, trial_data_seed(cfg.seed, pt.k, pt.snr_db, base));
        } else {
            std::vector<std::thread> pool;
            pool.reserve(count);
            for (int t = 0; t < count; ++t)
                pool.emplace_back([&, t] {
                    chunk[t] = run_trial(
                        cfg, pt, trial_data_seed(cfg.seed, pt.k, pt.snr_db, base + t));
                });
            for (auto& th : pool) th.join();
        }
        for (int t = 0; t < count; ++t) acc.add(chunk[t], adaptive);
    }
    return acc.finish(pt, cfg, adaptive);
}

} // namespace

std::vector<MseCurve> run_sweep(const ExperimentConfig& cfg) {
    cfg.validate();

    std::ofstream out_stream;
    if (!cfg.out.empty()) {
        out_stream.open(cfg.out, std::ios::trunc);
        if (!out_stream)
            throw std::runtime_error("run_sweep: cannot open output path '" + cfg.out + "'");
    }

    std::vector<MseCurve> curves;
    for (Solver solver : cfg.solvers)
        for (int k : cfg.k_list)
            for (double snr : cfg.snr_list)
                for (double eps : cfg.epsilon_list)
                    curves.push_back(run_point(cfg, TrialPoint{solver, k, snr, eps}));

    if (out_stream.is_open()) {
        write_curves_csv(out_stream, curves, cfg.decimate);
        if (!out_stream)
            throw std::runtime_error("run_sweep: write failed on '" + cfg.out + "'");
    }
    return curves;
}

void write_curves_csv(std::ostream& os, const std::vector<MseCurve>& curves, bool decimate) {
    os << "solver,k,snr_db,epsilon,trial_count,seed,iteration,mse\n";
    for (const MseCurve& c : curves) {
        const std::string prefix = std::string(solver_name(c.solver)) + "," +
                                   std::to_string(c.k) + "," + fmt17(c.snr_db) + "," +
                                   fmt17(c.epsilon) + "," + std::to_string(c.trial_count) +
                                   "," + std::to_string(c.seed) + ",";
        const std::size_t last = c.iterations.size() - 1;
        for (std::size_t j = 0; j < c.iterations.size(); ++j) {
            if (decimate && c.iterations[j] >= 0 &&
                c.iterations[j] % kDecimationStride != 0 && j != last)
                continue;
            os << prefix << c.iterations[j] << "," << fmt17(c.mse[j]) << "\n";
        }
    }
}

std::vector<MseCurve> read_curves_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) ||
        line != "solver,k,snr_db,epsilon,trial_count,seed,iteration,mse")
        throw std::invalid_argument("read_curves_csv: bad header");

    std::vector<MseCurve> curves;
    int lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string field;
        std::vector<std::string> f;
        while (std::getline(ss, field, ',')) f.push_back(field);
        if (f.size() != 8)
            throw std::invalid_argument("read_curves_csv: line " + std::to_string(lineno) +
                                        ": expected 8 fields");
        MseCurve key;
        key.solver = solver_from_name(f[0]);
        key.k = std::stoi(f[1]);
        key.snr_db = std::stod(f[2]);
        key.epsilon = std::stod(f[3]);
        key.trial_count = std::stoi(f[4]);
        key.seed = std::stoull(f[5]);
        const std::int64_t iter = std::stoll(f[6]);
        const double mse = std::stod(f[7]);

        const bool same = !curves.empty() && curves.back().solver == key.solver &&
                          curves.back().k == key.k && curves.back().snr_db == key.snr_db &&
                          curves.back().epsilon == key.epsilon &&
                          curves.back().trial_count == key.trial_count &&
                          curves.back().seed == key.seed;
        if (!same) curves.push_back(key);
        curves.back().iterations.push_back(iter);
        curves.back().mse.push_back(mse);
    }
    return curves;
}

std::vector<CrlbBound> compute_bounds(const ExperimentConfig& cfg) {
    cfg.validate();
    const double rho = cfg.mu_iss * cfg.lambda_ass * cfg.epsilon_list.front();
    std::vector<CrlbBound> bounds;
    for (int k : cfg.k_list) {
        for (double snr : cfg.snr_list) {
            CrlbBound b;
            b.k = k;
            b.snr_db = snr;
            b.sigma_n_sq = snr_to_noise_variance(snr);
            CrlbInputs inp;
            inp.n_dim = cfg.n_dim;
            inp.k_sparsity = k;
            inp.sigma_n_sq = b.sigma_n_sq;
            inp.sigma_sq = cfg.sigma_sq;
            inp.mu_iss = cfg.mu_iss;
            inp.rho = rho;
            b.crlb_nss = crlb_nss(inp);
            try {
                const CrlbAss ca = crlb_ass(inp);
                b.crlb_ass = ca.value;
                b.ass_valid = ca.valid;
            } catch (const SingularityError&) {
                b.crlb_ass = std::numeric_limits<double>::quiet_NaN();
                b.ass_singular = true;
            }
            bounds.push_back(b);
        }
    }
    return bounds;
}

std::vector<ComparisonRow> compare_with_bounds(const std::vector<MseCurve>& curves,
                                               const std::vector<CrlbBound>& bounds) {
    std::map<std::pair<int, double>, const CrlbBound*> index;
    for (const CrlbBound& b : bounds) index[{b.k, b.snr_db}] = &b;

    std::vector<ComparisonRow> rows;
    std::vector<std::string> missing;
    for (const MseCurve& c : curves) {
        auto it = index.find({c.k, c.snr_db});
        if (it == index.end()) {
            missing.push_back("(k=" + std::to_string(c.k) + ", snr_db=" + fmt17(c.snr_db) +
                              ")");
            continue;
        }
        ComparisonRow r;
        r.k = c.k;
        r.snr_db = c.snr_db;
        r.solver = c.solver;
        r.epsilon = c.epsilon;
        r.final_mse = c.final_mse();
        r.crlb_nss = it->second->crlb_nss;
        r.crlb_ass = it->second->crlb_ass;
        r.crlb_ass_valid = it->second->ass_valid;
        rows.push_back(r);
    }
    if (!missing.empty()) {
        std::string msg = "compare_with_bounds: no bound for keys:";
        for (const auto& m : missing) msg += " " + m;
        throw std::invalid_argument(msg);
    }
    return rows;
}

} // namespace spsense
