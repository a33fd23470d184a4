#include "spsense/analysis.hpp"

#include <cmath>
#include <stdexcept>

namespace spsense {

void CrlbInputs::validate() const {
    if (n_dim < 1) throw std::invalid_argument("CrlbInputs: n_dim must be >= 1");
    if (k_sparsity < 0 || k_sparsity > n_dim)
        throw std::invalid_argument("CrlbInputs: require 0 <= k_sparsity <= n_dim");
    if (sigma_n_sq < 0.0) throw std::invalid_argument("CrlbInputs: sigma_n_sq must be >= 0");
    if (sigma_sq <= 0.0) throw std::invalid_argument("CrlbInputs: sigma_sq must be positive");
    if (mu_iss <= 0.0) throw std::invalid_argument("CrlbInputs: mu_iss must be positive");
    if (rho < 0.0) throw std::invalid_argument("CrlbInputs: rho must be >= 0");
}

double crlb_nss(const CrlbInputs& inp) {
    inp.validate();
    return inp.k_sparsity * inp.sigma_n_sq / inp.n_dim;
}

namespace {

struct MsdCoefficients {
    // b(n+1) = linear b + quadratic b^2 + cubic b^3 + drive + phi, with the
    // Gaussian moments E z^4 = 3 sn^4 and E z^6 = 15 sn^6 folded into the
    // printed constants and phi set to its bound rho^2 K.
    double linear;
    double quadratic;
    double cubic;
    double drive;
    double phi;
};

MsdCoefficients msd_coefficients(const CrlbInputs& inp) {
    const double mu = inp.mu_iss;
    const double sn2 = inp.sigma_n_sq;
    const double s2 = inp.sigma_sq;
    const double n = inp.n_dim;

    MsdCoefficients c{};
    c.linear = 1.0 + (27.0 * mu * mu * sn2 * sn2 - 6.0 * mu * sn2) / n;
    // The middle token of the printed b^2 coefficient is read as 6 mu s^2.
    c.quadratic = (27.0 * mu * mu * sn2 * s2 - 6.0 * mu * s2) / n + 18.0 * mu * mu * s2 / (n * s2);
    c.cubic = 15.0 * mu * mu * sn2 * s2 * s2 / n;
    c.drive = -15.0 * mu * mu * sn2 * sn2 * sn2 / (n * s2);
    c.phi = inp.rho * inp.rho * inp.k_sparsity;
    return c;
}

} // namespace

double msd_linear_coefficient(const CrlbInputs& inp) {
    inp.validate();
    return msd_coefficients(inp).linear;
}

double msd_recursion_step(double b, const CrlbInputs& inp) {
    inp.validate();
    if (b < 0.0) throw std::invalid_argument("msd_recursion_step: b must be >= 0");
    const MsdCoefficients c = msd_coefficients(inp);
    return c.linear * b + c.quadratic * b * b + c.cubic * b * b * b + c.drive + c.phi;
}

double msd_recursion_step_linearized(double b, const CrlbInputs& inp) {
    inp.validate();
    const MsdCoefficients c = msd_coefficients(inp);
    return c.linear * b + c.drive + c.phi;
}

MsdTrajectory msd_trajectory(double b0, const CrlbInputs& inp, int steps, bool linearized) {
    inp.validate();
    if (steps < 0) throw std::invalid_argument("msd_trajectory: steps must be >= 0");
    const double lin = msd_linear_coefficient(inp);
    if (std::abs(lin) >= 1.0)
        throw SingularityError("msd_trajectory: linear coefficient " + std::to_string(lin) +
                               " is not a contraction");

    // Iterated as a plain polynomial map: the verbatim coefficients can
    // drive b(n) negative, matching the sign behavior of the closed form.
    const MsdCoefficients c = msd_coefficients(inp);
    MsdTrajectory traj;
    traj.values.reserve(static_cast<std::size_t>(steps) + 1);
    traj.values.push_back(b0);
    double b = b0;
    for (int i = 0; i < steps; ++i) {
        b = linearized ? c.linear * b + c.drive + c.phi
                       : c.linear * b + c.quadratic * b * b + c.cubic * b * b * b + c.drive +
                             c.phi;
        if (!std::isfinite(b))
            throw SingularityError("msd_trajectory: non-finite value at step " +
                                   std::to_string(i + 1));
        traj.values.push_back(b);
    }
    return traj;
}

CrlbAss crlb_ass(const CrlbInputs& inp) {
    inp.validate();
    const double mu = inp.mu_iss;
    const double sn2 = inp.sigma_n_sq;
    const double s2 = inp.sigma_sq;

    const double denom1 = 9.0 * mu * sn2 * s2 - 2.0 * s2;
    // Relative check: both denominators vanish exactly when 9 mu sn2 = 2.
    if (std::abs(denom1) <= 1e-12 * (9.0 * mu * sn2 * s2 + 2.0 * s2))
        throw SingularityError("crlb_ass: denominator 9*mu*sn2*s2 - 2*s2 vanishes");

    CrlbAss out;
    out.value = 5.0 * mu * sn2 * sn2 / denom1;

    // With rho = 0 the attractor term is absent, so its denominator is not
    // evaluated (it would be 0/0 at sn2 = 0).
    if (inp.rho > 0.0) {
        const double denom2 = 27.0 * mu * mu * sn2 * sn2 - 6.0 * mu * sn2;
        if (std::abs(denom2) <= 1e-12 * (27.0 * mu * mu * sn2 * sn2 + 6.0 * mu * sn2) ||
            denom2 == 0.0)
            throw SingularityError(
                "crlb_ass: denominator 27*mu^2*sn2^2 - 6*mu*sn2 vanishes");
        out.value -= inp.rho * inp.rho * inp.n_dim * inp.k_sparsity / denom2;
    }

    out.valid = out.value > 0.0 && std::abs(msd_linear_coefficient(inp)) < 1.0;
    return out;
}

double empirical_mse(const Eigen::VectorXd& truth,
                     const std::vector<Eigen::VectorXd>& estimates) {
    if (estimates.empty())
        throw std::invalid_argument("empirical_mse: no estimates");
    double sum = 0.0;
    for (const auto& est : estimates) {
        if (est.size() != truth.size())
            throw ShapeError("empirical_mse: estimate length != truth length");
        sum += (truth - est).squaredNorm();
    }
    return sum / static_cast<double>(estimates.size());
}

} // namespace spsense
