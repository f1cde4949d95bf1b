#include "polycop/ghk.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "polycop/errors.hpp"
#include "polycop/normal.hpp"

namespace polycop {

void UtilitySpec::validate() const {
    const int J = num_alternatives();
    if (J < 2) throw DomainError("UtilitySpec: need at least two alternatives");
    if (chosen < 1 || chosen > J)
        throw DomainError("UtilitySpec: chosen index " + std::to_string(chosen) +
                          " outside 1.." + std::to_string(J));
    // PD range for an exchangeable correlation matrix.
    if (!(exch_corr < 1.0 && exch_corr > -1.0 / (J - 1)))
        throw DomainError("UtilitySpec: exchangeable correlation " + std::to_string(exch_corr) +
                          " outside (-1/(J-1), 1)");
    for (double v : systematic)
        if (!std::isfinite(v)) throw DomainError("UtilitySpec: non-finite systematic utility");
}

Matrix UtilitySpec::error_cov() const {
    const int J = num_alternatives();
    Matrix s(J, J, exch_corr);
    for (int j = 0; j < J; ++j) s(j, j) = 1.0;
    return s;
}

Matrix UtilitySpec::differenced_cov() const {
    // Cov(u_k - u_c, u_l - u_c) = s_kl - s_kc - s_lc + 1; exchangeable case.
    const int J = num_alternatives();
    const double a = exch_corr;
    Matrix d(J - 1, J - 1, 1.0 - a);
    for (int k = 0; k < J - 1; ++k) d(k, k) = 2.0 - 2.0 * a;
    return d;
}

double ghk_rectangle_prob(std::span<const double> bounds_upper, const Matrix& chol,
                          const GhkConfig& cfg, const RngStream& stream) {
    const std::size_t dim = chol.rows();
    if (chol.cols() != dim || bounds_upper.size() != dim)
        throw ShapeError("ghk_rectangle_prob: bounds length " +
                         std::to_string(bounds_upper.size()) + " does not match Cholesky factor " +
                         std::to_string(dim) + "x" + std::to_string(chol.cols()));
    for (std::size_t j = 0; j < dim; ++j)
        if (!(chol(j, j) > 0.0))
            throw DomainError("ghk_rectangle_prob: Cholesky diagonal must be positive");
    if (cfg.num_draws < 1) throw DomainError("ghk_rectangle_prob: num_draws must be >= 1");

    // Dimension one needs no simulation.
    if (dim == 1) return std_normal_cdf(bounds_upper[0] / chol(0, 0));

    const int R = cfg.num_draws;
    std::vector<double> eta(dim - 1);
    double sum = 0.0;
    for (int r = 0; r < R; ++r) {
        // Antithetic pairs share a counter block; the odd member mirrors u.
        const std::uint64_t block = cfg.antithetic ? static_cast<std::uint64_t>(r / 2)
                                                   : static_cast<std::uint64_t>(r);
        const bool mirror = cfg.antithetic && (r % 2 == 1);
        double prob = 1.0;
        for (std::size_t k = 0; k < dim; ++k) {
            double shift = 0.0;
            for (std::size_t i = 0; i < k; ++i) shift += chol(k, i) * eta[i];
            const double upper = (bounds_upper[k] - shift) / chol(k, k);
            const double pk = std_normal_cdf(upper);
            prob *= pk;
            if (k + 1 < dim) {
                if (pk <= 0.0) {
                    // Impossible branch: probability already zero, draw at the bound.
                    eta[k] = upper;
                    prob = 0.0;
                    continue;
                }
                double u = uniform_draw(stream, block * (dim - 1) + k);
                if (mirror) u = 1.0 - u;
                eta[k] = std_normal_quantile(std::clamp(u * pk, 1e-300, 1.0 - 1e-16));
            }
        }
        sum += prob;
    }
    return sum / R;
}

double mnp_choice_prob(const UtilitySpec& spec, const GhkConfig& cfg, const RngStream& stream) {
    spec.validate();
    const int J = spec.num_alternatives();
    const Matrix L = cholesky(spec.differenced_cov());
    // I = chosen iff u_k - u_c <= V_c - V_k for every other alternative k.
    std::vector<double> bounds;
    bounds.reserve(J - 1);
    const double vc = spec.systematic[spec.chosen - 1];
    for (int k = 0; k < J; ++k)
        if (k != spec.chosen - 1) bounds.push_back(vc - spec.systematic[k]);
    return ghk_rectangle_prob(bounds, L, cfg, stream);
}

double mnl_choice_prob(const UtilitySpec& spec) {
    spec.validate();
    const double vmax = *std::max_element(spec.systematic.begin(), spec.systematic.end());
    double denom = 0.0;
    for (double v : spec.systematic) denom += std::exp(v - vmax);
    return std::exp(spec.systematic[spec.chosen - 1] - vmax) / denom;
}

}  // namespace polycop
