#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "polycop/matrix.hpp"
#include "polycop/rng.hpp"

namespace polycop {

struct GhkConfig {
    int num_draws = 250;
    bool antithetic = true;
    std::uint64_t master_seed = 0;
};

// Systematic utilities of the J alternatives plus the chosen index and the
// exchangeable error covariance (unit diagonal, constant off-diagonal a).
struct UtilitySpec {
    std::vector<double> systematic;  // V_j, one entry per alternative
    int chosen = 1;                  // 1-based
    double exch_corr = 0.0;          // off-diagonal of the error covariance

    int num_alternatives() const { return static_cast<int>(systematic.size()); }
    void validate() const;

    // Full J x J exchangeable error covariance.
    Matrix error_cov() const;
    // (J-1) x (J-1) covariance of u_k - u_chosen, k != chosen.
    Matrix differenced_cov() const;
};

// Simulated P(L * eta <= bounds) for lower-triangular L with positive
// diagonal and iid standard normal eta, by sequential conditioning on
// truncated draws. Unbiased; exact (zero variance) in dimension one.
// Deterministic given (cfg, stream): draws are indexed by
// (replicate, dimension) on the stream, so repeated calls never differ and
// likelihood evaluations share common random numbers.
double ghk_rectangle_prob(std::span<const double> bounds_upper, const Matrix& chol,
                          const GhkConfig& cfg, const RngStream& stream);

// Multinomial probit choice probability P(I = chosen): differences utilities
// against the chosen alternative and evaluates the resulting (J-1)-dim
// rectangle with the GHK simulator.
double mnp_choice_prob(const UtilitySpec& spec, const GhkConfig& cfg, const RngStream& stream);

// Multinomial logit choice probability, computed with max subtraction.
double mnl_choice_prob(const UtilitySpec& spec);

}  // namespace polycop
