#pragma once

#include <Eigen/Dense>
#include <vector>

#include "spsense/errors.hpp"
#include "spsense/model.hpp"

namespace spsense {

struct CrlbInputs {
    int n_dim = 40;
    int k_sparsity = 2;
    double sigma_n_sq = 1.0;  // noise variance
    double sigma_sq = 1.0;    // sensing-entry variance
    double mu_iss = 1.5;
    double rho = 0.0;

    void validate() const;
};

/// Batch-reconstruction bound: K sigma_n^2 / N.
double crlb_nss(const CrlbInputs& inp);

// Coefficient multiplying b(n) in the steady-state recursion:
// 1 + (27 mu^2 sn^4 - 6 mu sn^2)/N. The recursion contracts iff |.| < 1.
double msd_linear_coefficient(const CrlbInputs& inp);

/// One step of the mean-square-deviation recursion, with the attractor
/// contribution replaced by its bound rho^2 K. Includes the b^2 and b^3
/// terms.
double msd_recursion_step(double b, const CrlbInputs& inp);

/// Same step with the b^2 and b^3 terms dropped (the small-deviation
/// linearization whose fixed point is the closed-form steady state).
double msd_recursion_step_linearized(double b, const CrlbInputs& inp);

struct MsdTrajectory {
    std::vector<double> values;  // b(0..steps)
};

/// Iterates the recursion. Refuses (throws SingularityError) when the
/// linear coefficient is not a contraction, since the trajectory then has
/// no meaningful steady state.
MsdTrajectory msd_trajectory(double b0, const CrlbInputs& inp, int steps,
                             bool linearized = false);

struct CrlbAss {
    double value = 0.0;
    // The closed form can be negative or sit outside the contraction
    // region; the raw value is kept and flagged instead of clamped.
    bool valid = false;
};

/// Steady-state prediction 5 mu sn^4/(9 mu sn^2 s^2 - 2 s^2)
///                        - rho^2 N K/(27 mu^2 sn^4 - 6 mu sn^2).
/// Throws SingularityError naming the vanishing denominator. With rho = 0
/// the second term is absent and only the first denominator is checked.
CrlbAss crlb_ass(const CrlbInputs& inp);

/// Mean over trials of ||truth - estimate||^2.
double empirical_mse(const Eigen::VectorXd& truth,
                     const std::vector<Eigen::VectorXd>& estimates);

} // namespace spsense
