#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "polycop/dataset.hpp"
#include "polycop/latent.hpp"
#include "polycop/matrix.hpp"

namespace polycop {

// True coefficients of the auxiliary earnings / working-hours regressions
// used by the generator. Deltas run over the choice covariates (constant
// first), kappas over alternatives, lambdas over the extra exogenous
// columns.
struct FirstStageTruth {
    std::vector<double> delta_w, kappa_w, lambda_w;
    std::vector<double> delta_h, kappa_h, lambda_h;
    double sd_w = 5.0;
    double sd_h = 0.2;
};

FirstStageTruth default_first_stage_truth(int J, int num_z, int num_zext);

// Synthetic data-generating process: covariates are standard normal, the
// latent errors follow LatentCovSpec, utilities are v^l + z*beta_j + u_j,
// the binary outcome is 1(x*gamma + tau_chosen + eps > 0).
struct DgpConfig {
    std::size_t n = 1000;
    int J = 3;
    int num_z = 1;     // choice covariates beyond the constant
    int num_x = 1;     // outcome-only covariates
    int num_zext = 1;  // extra first-stage covariates
    Matrix beta;       // J x (1 + num_z); base row must be zero
    int base_alt = 1;
    std::vector<double> gamma;  // num_x
    std::vector<double> tau;    // J
    LatentCovSpec latent;

    // Robustness options; both require latent.rho_star == 0.
    bool non_normal_eps = false;  // centered exponential outcome error
    enum class Kernel { normal, gumbel } kernel = Kernel::normal;

    // Utilities reduce to the latent errors alone (v^l and beta forced to
    // zero). Used when checking the latent-moment identities, which hold
    // exactly only with zero systematic utilities.
    bool zero_systematic = false;

    FirstStageTruth first_stage;
    std::uint64_t seed = 0;
    bool emit_group = true;

    void validate() const;
};

// Everything the generator knows that estimation must not see.
struct TruthRecord {
    std::vector<double> eps;
    Matrix u;  // n x J
    Matrix y;  // n x J latent utilities
    Matrix vl_true;
    std::vector<int> chosen;        // 1-based
    std::vector<int> second_place;  // 1-based index of the second-highest utility
    std::vector<double> xi;         // second-highest utility minus chosen u
    std::uint64_t seed = 0;
};

struct SimulatedData {
    Dataset dataset;
    TruthRecord truth;
};

// Deterministic given cfg.seed; rows are generated on per-row streams so the
// output is identical regardless of how generation is chunked.
SimulatedData simulate_dgp(const DgpConfig& cfg);

// Sample moments of the latent draws, used to cross-check the test module.
struct MomentReport {
    std::vector<std::size_t> counts;        // per chosen alternative
    std::vector<double> choice_shares;
    std::vector<double> cross_moment;       // E[eps * xi | chosen = c], zero-mean centering
    std::vector<double> cross_moment_se;
    double pooled_cov = 0.0;                // Cov(eps, xi) over all rows
    double pooled_cov_se = 0.0;
    std::vector<double> cov_eps_u;          // Cov(eps, u_j)
    std::vector<double> cov_eps_u_se;
    Matrix second_place_freq;               // [chosen-1][j]: relative frequency
};

MomentReport empirical_moments(const Dataset& ds, const TruthRecord& truth);

// A convenient default configuration used across tests: J alternatives,
// moderate utility spread, documented coefficient values.
DgpConfig default_dgp_config(std::size_t n, int J, std::uint64_t seed);

}  // namespace polycop
