#pragma once

#include <cstdint>
#include <vector>

#include "polycop/choice_model.hpp"
#include "polycop/dataset.hpp"
#include "polycop/matrix.hpp"
#include "polycop/optim.hpp"
#include "polycop/quadrature.hpp"

namespace polycop {

// Correlation reparameterization used by the optimizer: strictly decreasing,
// odd, with range (-1, 1).
double rho_transform(double raw);
double rho_transform_inverse(double rho);

struct JointParams {
    std::vector<double> gamma;    // outcome-equation coefficients on x
    std::vector<double> tau;      // J alternative effects
    std::vector<double> rho_raw;  // J unconstrained correlations

    int num_alternatives() const { return static_cast<int>(tau.size()); }
    std::vector<double> rho() const;

    std::vector<double> flatten() const;  // gamma | tau | rho_raw
    void unflatten(const std::vector<double>& theta);
};

enum class FitMode { two_step, full };

// P(m=0, I=j*) for one observation: the probability that the outcome error
// stays below -(margin) while the choice event of marginal probability f2
// occurs, under a Gaussian copula with correlation rho. margin = x*gamma +
// tau_j*. Evaluated by Gauss-Legendre over the outcome error; rule is the
// reference rule on [-1,1].
double prob_unmarried_and_major(double margin, double f2, double rho,
                                const QuadratureRule& rule);

// Complement within the choice event: f2 - prob_unmarried_and_major. Throws
// InternalConsistencyError if the difference is below -1e-12.
double prob_married_and_major(double margin, double f2, double rho, const QuadratureRule& rule);

// Indicator-weighted log-likelihood over rows; probabilities floored at
// 1e-12. f2_cache holds the chosen-alternative choice probability per row.
double joint_loglik(const JointParams& params, const ModelData& data,
                    const std::vector<double>& f2_cache, const QuadratureRule& rule);
std::vector<double> per_row_joint_loglik(const JointParams& params, const ModelData& data,
                                         const std::vector<double>& f2_cache,
                                         const QuadratureRule& rule);

// Chosen-alternative choice probabilities, clamped to [1e-12, 1-1e-12].
std::vector<double> build_f2_cache(const ChoiceParams& params, const ModelData& data);

struct JointFitConfig {
    FitMode mode = FitMode::two_step;
    std::size_t quad_order = 40;
    OptimOptions optim;
};

struct FitResult {
    JointParams params;
    std::vector<double> rho;  // transformed correlations
    ChoiceParams beta;        // fixed (two_step) or re-estimated (full)
    FitMode mode = FitMode::two_step;
    double loglik = 0.0;
    double gradient_norm = 0.0;
    int iterations = 0;
    bool converged = false;
    std::uint64_t seed = 0;
    std::size_t quad_order = 40;

    // OPG-based uncertainty; rho_cov is on the correlation scale (delta
    // method through the transform).
    std::vector<double> se_gamma, se_tau, se_rho;
    Matrix rho_cov;
    bool cov_pseudo = false;
    int opg_rank = 0;
};

// Moment-based starting values: gamma = 0, tau from per-alternative marriage
// shares, rho = 0.
JointParams make_joint_init(const ModelData& data);

// Simultaneous estimation of {gamma, tau, rho} (two_step: beta and the
// choice probabilities fixed from step one) or of all of theta (full).
// Throws SpecificationError when the outcome design contains a constant
// column, which the tau block already spans.
FitResult fit_joint(const ModelData& data, const ChoiceFit& step1, const JointParams& init,
                    const JointFitConfig& cfg);

}  // namespace polycop
