#pragma once

#include <string>
#include <vector>

#include "polycop/dataset.hpp"
#include "polycop/ghk.hpp"
#include "polycop/matrix.hpp"
#include "polycop/optim.hpp"

namespace polycop {

enum class KernelType { logit, probit };

// Choice-equation parameters. The wage coefficient is fixed at one (results
// read in expected-hourly-earnings units) and the base alternative's block is
// identically zero.
struct ChoiceParams {
    Matrix beta;  // J x kz; row base_alt-1 is zero
    int base_alt = 1;
    KernelType kernel = KernelType::logit;
    GhkConfig ghk;
    double exch_corr = 0.0;  // fixed utility-error correlation, never estimated

    int num_alternatives() const { return static_cast<int>(beta.rows()); }
    int num_covariates() const { return static_cast<int>(beta.cols()); }

    std::vector<double> flatten() const;              // non-base rows, row-major
    void unflatten(const std::vector<double>& theta);
    void validate() const;
};

ChoiceParams make_choice_params(int J, int kz, int base_alt, KernelType kernel,
                                const GhkConfig& ghk = {});

struct ChoiceFit {
    ChoiceParams params;
    double loglik = 0.0;
    double gradient_norm = 0.0;
    int iterations = 0;
    bool converged = false;
    RngStream seed_record;
    bool separation_flag = false;
    std::string separation_detail;
};

// Probability of each alternative for one row. Probit probabilities use the
// row's own stream with common random numbers, so repeated evaluations and
// evaluations across parameter values share draws.
std::vector<double> choice_prob_row(const ChoiceParams& params, const ModelData& data,
                                    std::size_t row);

// Log-likelihood of the observed choices; probabilities floored at 1e-12.
double choice_loglik(const ChoiceParams& params, const ModelData& data);
std::vector<double> per_row_choice_loglik(const ChoiceParams& params, const ModelData& data);

// Maximum (simulated) likelihood fit. A logit fit seeds the probit fit when
// no explicit starting values are supplied via init.
ChoiceFit fit_choice(const ModelData& data, const ChoiceParams& init,
                     const OptimOptions& opts = {});

}  // namespace polycop
