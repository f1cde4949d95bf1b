#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "polycop/joint_model.hpp"
#include "polycop/latent.hpp"
#include "polycop/matrix.hpp"
#include "polycop/rng.hpp"

namespace polycop {

// Raised when an accept-reject conditioning step accepts nothing.
struct ConditioningError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SecondPlaceResult {
    std::vector<double> probs;  // P(y_j is second-highest | y_chosen is highest); 0 at chosen
    double acceptance_rate = 0.0;
    std::size_t accepted = 0;
};

// Conditional second-place probabilities by accept-reject Monte Carlo on the
// event that the chosen alternative holds the highest latent utility.
// systematic shifts the utility means; empty means all zero.
SecondPlaceResult second_place_probs(const LatentCovSpec& spec,
                                     const std::vector<double>& systematic, int chosen,
                                     std::size_t mc_draws, const RngStream& stream);

// Both sides of the order-statistics covariance identity, estimated from one
// draw set: lhs = Cov(eps, y^(r)) with y^(r) the r-th highest utility, rhs =
// sum_j rho_star_j * P(y_j = y^(r)). se_diff is the Monte Carlo standard
// error of lhs - rhs.
struct Theorem1Result {
    double lhs = 0.0;
    double rhs = 0.0;
    double se_diff = 0.0;
};

Theorem1Result theorem1_covariance(const LatentCovSpec& spec, int r, std::size_t mc_draws,
                                   const RngStream& stream);

// sum_j rho_star_j * P(y_j = y^(2) | chosen highest) - rho_star_chosen: the
// latent-to-estimable covariance map evaluated at the population level.
double implied_xi_covariance(const LatentCovSpec& spec, int chosen, std::size_t mc_draws,
                             const RngStream& stream,
                             const std::vector<double>& systematic = {});

struct TestReport {
    std::vector<double> rho_hat;
    Matrix rho_cov;
    double wald = 0.0;
    int dof = 0;
    double p_value = 1.0;
    double level = 0.05;
    bool reject = false;
    bool pseudo_inverse = false;
    std::string note;
};

// Wald test of rho_1 = ... = rho_J = 0 using the correlation-scale
// covariance block of the fit. Singular covariance falls back to a
// pseudo-inverse with rank-adjusted degrees of freedom and a flagged report.
TestReport wald_rho_test(const FitResult& fit, double level = 0.05);

// How the outcome error is generated relative to the utility errors.
enum class EpsMode {
    joint_normal,                    // Cov(eps, u_j) = rho_star_j
    independent_normal,              // eps ~ N(0,1), independent of u
    independent_centered_exponential  // eps ~ Exp(1) - 1, independent of u
};

struct DistFreeResult {
    double cov = 0.0;  // Monte Carlo Cov(eps, xi), pooled over chosen alternatives
    double se = 0.0;
};

// Appendix-style robustness probe: under an independent eps generator the
// pooled covariance between eps and the normalized choice error is zero for
// any eps distribution.
DistFreeResult distribution_free_check(const LatentCovSpec& spec, EpsMode mode,
                                       std::size_t mc_draws, const RngStream& stream);

}  // namespace polycop
