#pragma once

#include "polycop/matrix.hpp"

namespace polycop {

struct OpgResult {
    Matrix cov;         // inverse of the score outer product
    bool pseudo = false;  // true when a pseudo-inverse had to be used
    int rank = 0;
};

// Covariance estimate from per-observation score vectors (N x P): the
// inverse of sum_i g_i g_i'. Rank-deficient outer products fall back to a
// pseudo-inverse and are flagged.
OpgResult opg_covariance(const Matrix& per_row_gradients);

// Symmetric inverse with pseudo-inverse fallback; exposed for the Wald test.
OpgResult invert_psd(const Matrix& m);

}  // namespace polycop
