// Command-line front end: run/sweep experiments, print CRLB tables, and
// join measured curves with the closed-form bounds.

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "spsense/harness.hpp"

namespace {

struct CommonFlags {
    std::string config_path;
    std::string out;
    std::string solvers;
    std::uint64_t seed = 0;
    int trials = 0;
    int workers = 0;
    bool no_decimate = false;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
    cmd->add_option("--config", f.config_path, "experiment config file (key = value lines)");
    cmd->add_option("--seed", f.seed, "root seed override");
    cmd->add_option("--trials", f.trials, "Monte Carlo trials override");
    cmd->add_option("--out", f.out, "output CSV path");
    cmd->add_option("--solvers", f.solvers, "comma list: rza-nlmf,nlmf,omp,bpdn");
    cmd->add_flag("--no-decimate", f.no_decimate, "write every iteration to CSV");
    cmd->add_option("--workers", f.workers, "parallel trial workers");
}

spsense::ExperimentConfig load_config(const CommonFlags& f) {
    spsense::ExperimentConfig cfg;
    if (!f.config_path.empty()) cfg = spsense::parse_config_file(f.config_path);
    if (f.seed != 0) cfg.seed = f.seed;
    if (f.trials != 0) cfg.trials = f.trials;
    if (!f.out.empty()) cfg.out = f.out;
    if (f.workers != 0) cfg.workers = f.workers;
    if (f.no_decimate) cfg.decimate = false;
    if (!f.solvers.empty()) {
        cfg.solvers.clear();
        std::stringstream ss(f.solvers);
        std::string item;
        while (std::getline(ss, item, ','))
            cfg.solvers.push_back(spsense::solver_from_name(item));
    }
    cfg.validate();
    return cfg;
}

void print_curve_summaries(const std::vector<spsense::MseCurve>& curves) {
    std::printf("%-9s %4s %8s %9s %7s %6s %13s\n", "solver", "k", "snr_db", "epsilon",
                "trials", "failed", "final_mse");
    for (const auto& c : curves)
        std::printf("%-9s %4d %8.3g %9.6g %7d %6d %13.6e\n", spsense::solver_name(c.solver),
                    c.k, c.snr_db, c.epsilon, c.trial_count, c.failed_trials, c.final_mse());
}

int cmd_run(const CommonFlags& f) {
    spsense::ExperimentConfig cfg = load_config(f);
    if (cfg.k_list.size() != 1 || cfg.snr_list.size() != 1 || cfg.epsilon_list.size() != 1)
        throw std::invalid_argument(
            "run expects a single config point (k_list, snr_list, epsilon_list of length 1); "
            "use 'sweep' for grids");
    print_curve_summaries(spsense::run_sweep(cfg));
    return 0;
}

int cmd_sweep(const CommonFlags& f) {
    spsense::ExperimentConfig cfg = load_config(f);
    const auto curves = spsense::run_sweep(cfg);
    print_curve_summaries(curves);
    if (!cfg.out.empty()) std::printf("wrote %zu curves to %s\n", curves.size(), cfg.out.c_str());
    return 0;
}

int cmd_bounds(const CommonFlags& f) {
    spsense::ExperimentConfig cfg = load_config(f);
    const auto bounds = spsense::compute_bounds(cfg);
    std::printf("%4s %8s %12s %13s %13s %6s\n", "k", "snr_db", "sigma_n_sq", "crlb_nss",
                "crlb_ass", "valid");
    for (const auto& b : bounds) {
        if (b.ass_singular)
            std::printf("%4d %8.3g %12.6g %13.6e %13s %6s\n", b.k, b.snr_db, b.sigma_n_sq,
                        b.crlb_nss, "singular", "-");
        else
            std::printf("%4d %8.3g %12.6g %13.6e %13.6e %6s\n", b.k, b.snr_db, b.sigma_n_sq,
                        b.crlb_nss, b.crlb_ass, b.ass_valid ? "yes" : "no");
    }
    if (!cfg.out.empty()) {
        std::ofstream os(cfg.out, std::ios::trunc);
        if (!os) throw std::runtime_error("cannot open '" + cfg.out + "'");
        os << "k,snr_db,sigma_n_sq,crlb_nss,crlb_ass,ass_valid\n";
        char buf[256];
        for (const auto& b : bounds) {
            std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g,%.17g,%.17g,%d\n", b.k, b.snr_db,
                          b.sigma_n_sq, b.crlb_nss, b.crlb_ass, b.ass_valid ? 1 : 0);
            os << buf;
        }
    }
    return 0;
}

int cmd_compare(const CommonFlags& f, const std::string& curves_path) {
    spsense::ExperimentConfig cfg = load_config(f);
    std::vector<spsense::MseCurve> curves;
    if (!curves_path.empty()) {
        std::ifstream is(curves_path);
        if (!is) throw std::runtime_error("cannot open curves CSV '" + curves_path + "'");
        curves = spsense::read_curves_csv(is);
    } else {
        spsense::ExperimentConfig sweep_cfg = cfg;
        sweep_cfg.out.clear();  // --out names the comparison table here
        curves = spsense::run_sweep(sweep_cfg);
    }
    const auto rows = spsense::compare_with_bounds(curves, spsense::compute_bounds(cfg));

    std::printf("%4s %8s %-9s %9s %13s %13s %13s %6s\n", "k", "snr_db", "solver", "epsilon",
                "final_mse", "crlb_nss", "crlb_ass", "valid");
    for (const auto& r : rows)
        std::printf("%4d %8.3g %-9s %9.6g %13.6e %13.6e %13.6e %6s\n", r.k, r.snr_db,
                    spsense::solver_name(r.solver), r.epsilon, r.final_mse, r.crlb_nss,
                    r.crlb_ass, r.crlb_ass_valid ? "yes" : "no");

    if (!cfg.out.empty()) {
        std::ofstream os(cfg.out, std::ios::trunc);
        if (!os) throw std::runtime_error("cannot open '" + cfg.out + "'");
        os << "k,snr_db,solver,epsilon,final_mse,crlb_nss,crlb_ass,crlb_ass_valid\n";
        char buf[320];
        for (const auto& r : rows) {
            std::snprintf(buf, sizeof(buf), "%d,%.17g,%s,%.17g,%.17g,%.17g,%.17g,%d\n", r.k,
                          r.snr_db, spsense::solver_name(r.solver), r.epsilon, r.final_mse,
                          r.crlb_nss, r.crlb_ass, r.crlb_ass_valid ? 1 : 0);
            os << buf;
        }
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"adaptive sparse sensing experiments (RZA-NLMF, OMP, BPDN)"};
    app.require_subcommand(1);

    CommonFlags run_f, sweep_f, bounds_f, compare_f;
    std::string curves_path;

    CLI::App* run = app.add_subcommand("run", "single config point, averaged over trials");
    add_common(run, run_f);
    CLI::App* sweep = app.add_subcommand("sweep", "full cartesian experiment sweep");
    add_common(sweep, sweep_f);
    CLI::App* bounds = app.add_subcommand("bounds", "closed-form CRLB table for the config grid");
    add_common(bounds, bounds_f);
    CLI::App* compare =
        app.add_subcommand("compare", "join measured final MSE with the CRLB table");
    add_common(compare, compare_f);
    compare->add_option("--curves", curves_path,
                        "existing curves CSV (otherwise the sweep runs in memory)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return cmd_run(run_f);
        if (sweep->parsed()) return cmd_sweep(sweep_f);
        if (bounds->parsed()) return cmd_bounds(bounds_f);
        if (compare->parsed()) return cmd_compare(compare_f, curves_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
