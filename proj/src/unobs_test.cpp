#include "polycop/unobs_test.hpp"

#include <algorithm>
#include <cmath>

#include "polycop/errors.hpp"
#include "polycop/normal.hpp"
#include "polycop/opg.hpp"

namespace polycop {

SecondPlaceResult second_place_probs(const LatentCovSpec& spec,
                                     const std::vector<double>& systematic, int chosen,
                                     std::size_t mc_draws, const RngStream& stream) {
    const int J = spec.num_alternatives();
    if (chosen < 1 || chosen > J)
        throw DomainError("second_place_probs: chosen index out of range");
    if (mc_draws < 1000) throw DomainError("second_place_probs: need at least 1000 draws");
    if (!systematic.empty() && static_cast<int>(systematic.size()) != J)
        throw ShapeError("second_place_probs: systematic utilities length mismatch");

    const LatentSampler sampler(spec);
    const int c = chosen - 1;
    std::vector<double> mean(J, 0.0);
    for (int j = 0; j < J; ++j) {
        if (!spec.mu.empty()) mean[j] += spec.mu[j];
        if (!systematic.empty()) mean[j] += systematic[j];
    }
    std::vector<std::size_t> counts(J, 0);
    std::size_t accepted = 0;
    double eps;
    std::vector<double> u(J), y(J);
    for (std::size_t d = 0; d < mc_draws; ++d) {
        sampler.draw(stream, d, eps, u);
        for (int j = 0; j < J; ++j) y[j] = u[j] + mean[j];
        int best = 0;
        for (int j = 1; j < J; ++j)
            if (y[j] > y[best]) best = j;
        if (best != c) continue;
        ++accepted;
        int second = (c == 0) ? 1 : 0;
        for (int j = 0; j < J; ++j)
            if (j != c && y[j] > y[second]) second = j;
        counts[second]++;
    }

    SecondPlaceResult out;
    out.accepted = accepted;
    out.acceptance_rate = static_cast<double>(accepted) / mc_draws;
    if (accepted == 0)
        throw ConditioningError(
            "second_place_probs: no draws satisfied the conditioning event (acceptance rate 0 "
            "of " +
            std::to_string(mc_draws) + " draws)");
    out.probs.assign(J, 0.0);
    for (int j = 0; j < J; ++j)
        out.probs[j] = static_cast<double>(counts[j]) / static_cast<double>(accepted);
    return out;
}

Theorem1Result theorem1_covariance(const LatentCovSpec& spec, int r, std::size_t mc_draws,
                                   const RngStream& stream) {
    const int J = spec.num_alternatives();
    if (r < 1 || r > J) throw DomainError("theorem1_covariance: order index out of range");
    if (mc_draws < 2) throw DomainError("theorem1_covariance: need at least two draws");

    const LatentSampler sampler(spec);
    double eps;
    std::vector<double> u(J), y(J);

    // One pass for means, one for the moments, same draws both times.
    double mean_eps = 0.0, mean_yr = 0.0;
    std::vector<double> order(J);
    for (std::size_t d = 0; d < mc_draws; ++d) {
        sampler.draw(stream, d, eps, u);
        for (int j = 0; j < J; ++j) y[j] = u[j] + (spec.mu.empty() ? 0.0 : spec.mu[j]);
        order.assign(y.begin(), y.end());
        std::nth_element(order.begin(), order.begin() + (r - 1), order.end(),
                         std::greater<double>());
        mean_eps += eps;
        mean_yr += order[r - 1];
    }
    mean_eps /= mc_draws;
    mean_yr /= mc_draws;

    double cov = 0.0, rhs = 0.0, var_t = 0.0, mean_t = 0.0;
    std::vector<std::size_t> hit(J, 0);
    std::vector<double> t_terms;
    t_terms.reserve(mc_draws);
    for (std::size_t d = 0; d < mc_draws; ++d) {
        sampler.draw(stream, d, eps, u);
        for (int j = 0; j < J; ++j) y[j] = u[j] + (spec.mu.empty() ? 0.0 : spec.mu[j]);
        int idx = 0;
        order.assign(y.begin(), y.end());
        std::nth_element(order.begin(), order.begin() + (r - 1), order.end(),
                         std::greater<double>());
        const double yr = order[r - 1];
        for (int j = 0; j < J; ++j)
            if (y[j] == yr) {
                idx = j;
                break;
            }
        hit[idx]++;
        const double lhs_term = (eps - mean_eps) * (yr - mean_yr);
        const double t = lhs_term - spec.rho_star[idx];
        cov += lhs_term;
        mean_t += t;
        t_terms.push_back(t);
    }
    cov /= mc_draws;
    mean_t /= mc_draws;
    for (double t : t_terms) var_t += (t - mean_t) * (t - mean_t);
    var_t /= (mc_draws - 1);
    for (int j = 0; j < J; ++j)
        rhs += spec.rho_star[j] * static_cast<double>(hit[j]) / static_cast<double>(mc_draws);

    Theorem1Result res;
    res.lhs = cov;
    res.rhs = rhs;
    res.se_diff = std::sqrt(var_t / mc_draws);
    return res;
}

double implied_xi_covariance(const LatentCovSpec& spec, int chosen, std::size_t mc_draws,
                             const RngStream& stream, const std::vector<double>& systematic) {
    const int J = spec.num_alternatives();
    if (chosen < 1 || chosen > J)
        throw DomainError("implied_xi_covariance: chosen index out of range");
    const SecondPlaceResult sp = second_place_probs(spec, systematic, chosen, mc_draws, stream);
    double v = 0.0;
    for (int j = 0; j < J; ++j) v += spec.rho_star[j] * sp.probs[j];
    return v - spec.rho_star[chosen - 1];
}

TestReport wald_rho_test(const FitResult& fit, double level) {
    const std::size_t J = fit.rho.size();
    if (J == 0 || fit.rho_cov.rows() != J || fit.rho_cov.cols() != J)
        throw DataError("wald_rho_test: fit lacks a correlation covariance block");
    if (!(level > 0.0 && level < 1.0))
        throw DomainError("wald_rho_test: significance level must lie in (0,1)");

    TestReport rep;
    rep.rho_hat = fit.rho;
    rep.rho_cov = fit.rho_cov;
    rep.level = level;

    const OpgResult inv = invert_psd(fit.rho_cov);
    rep.pseudo_inverse = inv.pseudo;
    rep.dof = inv.pseudo ? inv.rank : static_cast<int>(J);
    double w = 0.0;
    for (std::size_t a = 0; a < J; ++a)
        for (std::size_t b = 0; b < J; ++b) w += fit.rho[a] * inv.cov(a, b) * fit.rho[b];
    rep.wald = std::max(w, 0.0);
    rep.p_value = rep.dof > 0 ? chi_squared_sf(rep.wald, rep.dof) : 1.0;
    rep.reject = rep.p_value < level;
    rep.note =
        "Rejection indicates that unobservables driving the binary outcome also drive the "
        "choice. The converse does not hold: equal nonzero latent covariances across "
        "alternatives also yield zero correlations, so a non-rejection is evidence, not "
        "identification.";
    if (inv.pseudo)
        rep.note += " Covariance block was singular; pseudo-inverse with rank-adjusted degrees "
                    "of freedom used.";
    return rep;
}

DistFreeResult distribution_free_check(const LatentCovSpec& spec, EpsMode mode,
                                       std::size_t mc_draws, const RngStream& stream) {
    const int J = spec.num_alternatives();
    if (mc_draws < 2) throw DomainError("distribution_free_check: need at least two draws");

    // Under the independent modes only the utility-error block is used.
    Matrix u_chol;
    LatentCovSpec indep = spec;
    if (mode != EpsMode::joint_normal) {
        Matrix s(J, J, spec.exch_corr);
        for (int j = 0; j < J; ++j) s(j, j) = 1.0;
        u_chol = cholesky(s);
    }
    const LatentSampler sampler(mode == EpsMode::joint_normal ? spec : [&] {
        indep.rho_star.assign(J, 0.0);
        return indep;
    }());

    double eps;
    std::vector<double> u(J), y(J), eps_v, xi_v;
    eps_v.reserve(mc_draws);
    xi_v.reserve(mc_draws);
    const std::vector<double>& mu = spec.mu;
    for (std::size_t d = 0; d < mc_draws; ++d) {
        if (mode == EpsMode::joint_normal) {
            sampler.draw(stream, d, eps, u);
        } else {
            // eps on its own counter slot, then the J utility errors.
            const std::uint64_t base = d * static_cast<std::uint64_t>(J + 1);
            if (mode == EpsMode::independent_normal)
                eps = normal_draw(stream, base);
            else
                eps = -std::log(uniform_draw(stream, base)) - 1.0;
            double z[64];
            for (int j = 0; j < J; ++j) z[j] = normal_draw(stream, base + 1 + j);
            for (int j = 0; j < J; ++j) {
                double s = 0.0;
                for (int t = 0; t <= j; ++t) s += u_chol(j, t) * z[t];
                u[j] = s;
            }
        }
        for (int j = 0; j < J; ++j) y[j] = u[j] + (mu.empty() ? 0.0 : mu[j]);
        int best = 0;
        for (int j = 1; j < J; ++j)
            if (y[j] > y[best]) best = j;
        int second = (best == 0) ? 1 : 0;
        for (int j = 0; j < J; ++j)
            if (j != best && y[j] > y[second]) second = j;
        eps_v.push_back(eps);
        xi_v.push_back(y[second] - u[best]);  // u is the idiosyncratic part only
    }
    {
    }

    double me = 0.0, mx = 0.0;
    for (std::size_t d = 0; d < mc_draws; ++d) {
        me += eps_v[d];
        mx += xi_v[d];
    }
    me /= mc_draws;
    mx /= mc_draws;
    double cov = 0.0, var = 0.0;
    for (std::size_t d = 0; d < mc_draws; ++d) {
        const double t = (eps_v[d] - me) * (xi_v[d] - mx);
        cov += t;
    }
    cov /= mc_draws;
    for (std::size_t d = 0; d < mc_draws; ++d) {
        const double t = (eps_v[d] - me) * (xi_v[d] - mx) - cov;
        var += t * t;
    }
    var /= (mc_draws - 1);

    DistFreeResult res;
    res.cov = cov;
    res.se = std::sqrt(var / mc_draws);
    return res;
}

}  // namespace polycop
