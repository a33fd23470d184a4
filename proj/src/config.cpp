#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "spsense/harness.hpp"

namespace spsense {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(trim(item));
    return out;
}

double parse_double(const std::string& v, const std::string& key) {
    try {
        std::size_t pos = 0;
        const double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("");
        return d;
    } catch (const std::exception&) {
        throw std::invalid_argument("config: bad number '" + v + "' for key '" + key + "'");
    }
}

long long parse_int(const std::string& v, const std::string& key) {
    try {
        std::size_t pos = 0;
        const long long i = std::stoll(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("");
        return i;
    } catch (const std::exception&) {
        throw std::invalid_argument("config: bad integer '" + v + "' for key '" + key + "'");
    }
}

bool parse_bool(const std::string& v, const std::string& key) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw std::invalid_argument("config: bad bool '" + v + "' for key '" + key + "'");
}

} // namespace

const char* solver_name(Solver s) {
    switch (s) {
        case Solver::RzaNlmf: return "rza-nlmf";
        case Solver::Nlmf: return "nlmf";
        case Solver::Omp: return "omp";
        case Solver::Bpdn: return "bpdn";
    }
    throw std::logic_error("solver_name: unknown solver");
}

Solver solver_from_name(const std::string& name) {
    if (name == "rza-nlmf") return Solver::RzaNlmf;
    if (name == "nlmf") return Solver::Nlmf;
    if (name == "omp") return Solver::Omp;
    if (name == "bpdn") return Solver::Bpdn;
    throw std::invalid_argument("unknown solver '" + name + "'");
}

bool solver_is_adaptive(Solver s) {
    return s == Solver::RzaNlmf || s == Solver::Nlmf;
}

void ExperimentConfig::validate() const {
    if (n_dim < 1 || m_meas < 1)
        throw std::invalid_argument("config: dimensions must be positive");
    if (k_list.empty() || snr_list.empty() || epsilon_list.empty() || solvers.empty())
        throw std::invalid_argument("config: lists must be non-empty");
    for (int k : k_list)
        if (k < 1 || k > n_dim)
            throw std::invalid_argument("config: k values must satisfy 1 <= k <= n_dim");
    for (double eps : epsilon_list)
        if (eps <= 0.0) throw std::invalid_argument("config: epsilon values must be positive");
    if (trials < 1) throw std::invalid_argument("config: trials must be >= 1");
    if (mu_iss <= 0.0) throw std::invalid_argument("config: mu_iss must be positive");
    if (lambda_ass < 0.0) throw std::invalid_argument("config: lambda must be >= 0");
    if (zeta < 0.0) throw std::invalid_argument("config: zeta must be >= 0");
    if (n_max < 1) throw std::invalid_argument("config: n_max must be >= 1");
    if (sigma_sq <= 0.0) throw std::invalid_argument("config: sigma_sq must be positive");
    if (workers < 1) throw std::invalid_argument("config: workers must be >= 1");
}

ExperimentConfig parse_config_text(const std::string& text) {
    ExperimentConfig cfg;
    std::stringstream ss(text);
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        const std::string stripped = trim(line.substr(0, line.find('#')));
        if (stripped.empty()) continue;
        const std::size_t eq = stripped.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": expected 'key = value'");
        const std::string key = trim(stripped.substr(0, eq));
        const std::string val = trim(stripped.substr(eq + 1));

        if (key == "n_dim") cfg.n_dim = static_cast<int>(parse_int(val, key));
        else if (key == "m_meas") cfg.m_meas = static_cast<int>(parse_int(val, key));
        else if (key == "k_list") {
            cfg.k_list.clear();
            for (const auto& v : split_list(val))
                cfg.k_list.push_back(static_cast<int>(parse_int(v, key)));
        } else if (key == "snr_list") {
            cfg.snr_list.clear();
            for (const auto& v : split_list(val)) cfg.snr_list.push_back(parse_double(v, key));
        } else if (key == "epsilon_list") {
            cfg.epsilon_list.clear();
            for (const auto& v : split_list(val))
                cfg.epsilon_list.push_back(parse_double(v, key));
        } else if (key == "trials") cfg.trials = static_cast<int>(parse_int(val, key));
        else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(parse_int(val, key));
        else if (key == "solvers") {
            cfg.solvers.clear();
            for (const auto& v : split_list(val)) cfg.solvers.push_back(solver_from_name(v));
        } else if (key == "mu_iss") cfg.mu_iss = parse_double(val, key);
        else if (key == "lambda") cfg.lambda_ass = parse_double(val, key);
        else if (key == "zeta") cfg.zeta = parse_double(val, key);
        else if (key == "n_max") cfg.n_max = parse_int(val, key);
        else if (key == "sigma_sq") cfg.sigma_sq = parse_double(val, key);
        else if (key == "out") cfg.out = val;
        else if (key == "decimate") cfg.decimate = parse_bool(val, key);
        else if (key == "workers") cfg.workers = static_cast<int>(parse_int(val, key));
        else
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": unknown key '" + key + "'");
    }
    cfg.validate();
    return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

} // namespace spsense
