#pragma once

#include <string>
#include <vector>

#include "polycop/dataset.hpp"
#include "polycop/matrix.hpp"

namespace polycop {

struct OlsFit {
    std::vector<double> coef;
    double residual_variance = 0.0;
    double condition_number = 0.0;  // from the R diagonal of the pivoted QR
    std::vector<double> se;         // classical OLS standard errors
    std::size_t n = 0;
};

// Least squares via column-pivoted QR. Throws DecompositionError naming the
// collinear columns when the design is rank deficient; requires n >= p.
OlsFit fit_ols(const Matrix& design, const std::vector<double>& response,
               const std::vector<std::string>* column_names = nullptr);

// One auxiliary labor-market regression: response = z*delta + alternative
// dummies*kappa + zext*lambda + error. No implicit intercept; the schema
// must carry a constant column in z if one is wanted.
struct FirstStageModel {
    std::vector<double> delta;
    std::vector<double> kappa;  // J alternative-dummy coefficients
    std::vector<double> lambda;
    double residual_variance = 0.0;
    double condition_number = 0.0;

    double predict(const std::vector<double>& z, int alternative,
                   const std::vector<double>& zext) const;
};

FirstStageModel fit_first_stage(const Dataset& ds, const std::string& response_col);

// Counterfactual expected earnings, hours, and their ratio for one
// individual across all J alternatives. Throws SpecificationError naming the
// individual when a predicted-hours entry is not positive.
struct ExpectedLaborOutcomes {
    std::vector<double> expected_earnings;
    std::vector<double> expected_hours;
    std::vector<double> normalized_wage;
};

ExpectedLaborOutcomes predict_counterfactuals(const FirstStageModel& model_w,
                                              const FirstStageModel& model_h,
                                              const std::vector<double>& z,
                                              const std::vector<double>& zext,
                                              std::size_t individual_index);

// n x J matrix of normalized expected wages for a whole dataset.
Matrix predict_wage_matrix(const FirstStageModel& model_w, const FirstStageModel& model_h,
                           const Dataset& ds);

}  // namespace polycop
