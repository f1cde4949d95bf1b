#include "polycop/dgp.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "polycop/errors.hpp"
#include "polycop/normal.hpp"
#include "polycop/rng.hpp"

namespace polycop {

FirstStageTruth default_first_stage_truth(int J, int num_z, int num_zext) {
    FirstStageTruth t;
    // Earnings in $1000/year, hours in 1000 hours/year; the implied hourly
    // wage sits near 15 with cross-alternative spread of about 0.5.
    t.delta_w.assign(1 + num_z, 2.0);
    t.delta_w[0] = 0.0;
    t.lambda_w.assign(num_zext, 1.5);
    t.kappa_w.resize(J);
    for (int j = 0; j < J; ++j) t.kappa_w[j] = 30.0 + 0.5 * j;
    t.delta_h.assign(1 + num_z, 0.05);
    t.delta_h[0] = 0.0;
    t.lambda_h.assign(num_zext, 0.02);
    t.kappa_h.assign(J, 2.0);
    t.sd_w = 5.0;
    t.sd_h = 0.2;
    return t;
}

void DgpConfig::validate() const {
    if (n == 0) throw ConfigError("dgp: n must be positive");
    if (J < 2) throw ConfigError("dgp: need at least two alternatives");
    if (latent.num_alternatives() != J)
        throw ConfigError("dgp: rho_star length must equal J");
    if (beta.rows() != static_cast<std::size_t>(J) ||
        beta.cols() != static_cast<std::size_t>(1 + num_z))
        throw ConfigError("dgp: beta must be J x (1 + num_z)");
    if (base_alt < 1 || base_alt > J) throw ConfigError("dgp: base alternative out of range");
    for (std::size_t c = 0; c < beta.cols(); ++c)
        if (beta(base_alt - 1, c) != 0.0)
            throw ConfigError("dgp: base-alternative beta block must be zero");
    if (gamma.size() != static_cast<std::size_t>(num_x))
        throw ConfigError("dgp: gamma length must equal num_x");
    if (tau.size() != static_cast<std::size_t>(J)) throw ConfigError("dgp: tau length must equal J");
    const bool rho_zero =
        std::all_of(latent.rho_star.begin(), latent.rho_star.end(), [](double r) { return r == 0.0; });
    if ((non_normal_eps || kernel == Kernel::gumbel) && !rho_zero)
        throw ConfigError("dgp: non-normal errors require rho_star = 0");
    if (first_stage.delta_w.size() != static_cast<std::size_t>(1 + num_z) ||
        first_stage.delta_h.size() != static_cast<std::size_t>(1 + num_z) ||
        first_stage.kappa_w.size() != static_cast<std::size_t>(J) ||
        first_stage.kappa_h.size() != static_cast<std::size_t>(J) ||
        first_stage.lambda_w.size() != static_cast<std::size_t>(num_zext) ||
        first_stage.lambda_h.size() != static_cast<std::size_t>(num_zext))
        throw ConfigError("dgp: first-stage coefficient lengths do not match dimensions");
    try {
        latent.validate();
    } catch (const std::exception& e) {
        throw ConfigError(std::string("dgp: implied latent covariance invalid: ") + e.what());
    }
}

SimulatedData simulate_dgp(const DgpConfig& cfg) {
    cfg.validate();
    const int J = cfg.J;
    const std::size_t n = cfg.n;
    const int kz = 1 + cfg.num_z;

    const std::uint64_t master = derive_stream(cfg.seed, stream_purpose::kDgp);
    const bool gaussian_joint = !cfg.non_normal_eps && cfg.kernel == DgpConfig::Kernel::normal;

    LatentSampler joint_sampler(cfg.latent);
    // Exchangeable factor for the independent-eps variants.
    Matrix u_chol;
    if (!gaussian_joint) {
        Matrix s(J, J, cfg.latent.exch_corr);
        for (int j = 0; j < J; ++j) s(j, j) = 1.0;
        u_chol = cholesky(s);
    }

    Dataset ds;
    ds.num_alternatives = J;
    ds.schema.choice = "choice";
    ds.schema.outcome = "outcome";
    ds.schema.z_cols = {"const"};
    for (int c = 1; c <= cfg.num_z; ++c) ds.schema.z_cols.push_back("z" + std::to_string(c));
    for (int c = 1; c <= cfg.num_x; ++c) ds.schema.x_cols.push_back("x" + std::to_string(c));
    for (int c = 1; c <= cfg.num_zext; ++c) ds.schema.zext_cols.push_back("w" + std::to_string(c));
    ds.schema.earnings = "earnings";
    ds.schema.hours = "hours";
    if (cfg.emit_group) ds.schema.group = "g";

    ds.column_names = ds.schema.z_cols;
    for (const auto& c : ds.schema.x_cols) ds.column_names.push_back(c);
    for (const auto& c : ds.schema.zext_cols) ds.column_names.push_back(c);
    ds.column_names.push_back("earnings");
    ds.column_names.push_back("hours");
    if (cfg.emit_group) ds.column_names.push_back("g");
    ds.column_names.push_back("choice");
    ds.column_names.push_back("outcome");
    ds.columns.assign(ds.column_names.size(), std::vector<double>(n));
    ds.choice.resize(n);
    ds.outcome.resize(n);

    TruthRecord truth;
    truth.seed = cfg.seed;
    truth.eps.resize(n);
    truth.u = Matrix(n, J);
    truth.y = Matrix(n, J);
    truth.vl_true = Matrix(n, J);
    truth.chosen.resize(n);
    truth.second_place.resize(n);
    truth.xi.resize(n);

    std::vector<double> z(kz), zext(cfg.num_zext), x(cfg.num_x), u(J), y(J), vl(J);
    for (std::size_t i = 0; i < n; ++i) {
        const RngStream row_stream{master, i};
        std::uint64_t slot = 0;
        z[0] = 1.0;
        for (int c = 1; c < kz; ++c) z[c] = normal_draw(row_stream, slot++);
        for (int c = 0; c < cfg.num_zext; ++c) zext[c] = normal_draw(row_stream, slot++);
        for (int c = 0; c < cfg.num_x; ++c) x[c] = normal_draw(row_stream, slot++);
        const double group = uniform_draw(row_stream, slot++) < 0.5 ? 0.0 : 1.0;
        const double noise_w = normal_draw(row_stream, slot++);
        const double noise_h = normal_draw(row_stream, slot++);

        double eps;
        if (gaussian_joint) {
            joint_sampler.draw_at(row_stream, slot, eps, u);
            slot += J + 1;
        } else {
            if (cfg.non_normal_eps)
                eps = -std::log(uniform_draw(row_stream, slot++)) - 1.0;
            else
                eps = normal_draw(row_stream, slot++);
            if (cfg.kernel == DgpConfig::Kernel::gumbel) {
                for (int j = 0; j < J; ++j)
                    u[j] = -std::log(-std::log(uniform_draw(row_stream, slot++)));
            } else {
                double zn[64];
                for (int j = 0; j < J; ++j) zn[j] = normal_draw(row_stream, slot++);
                for (int j = 0; j < J; ++j) {
                    double s = 0.0;
                    for (int t = 0; t <= j; ++t) s += u_chol(j, t) * zn[t];
                    u[j] = s;
                }
            }
        }

        for (int j = 0; j < J; ++j) {
            double ew = cfg.first_stage.kappa_w[j];
            double eh = cfg.first_stage.kappa_h[j];
            for (int c = 0; c < kz; ++c) {
                ew += cfg.first_stage.delta_w[c] * z[c];
                eh += cfg.first_stage.delta_h[c] * z[c];
            }
            for (int c = 0; c < cfg.num_zext; ++c) {
                ew += cfg.first_stage.lambda_w[c] * zext[c];
                eh += cfg.first_stage.lambda_h[c] * zext[c];
            }
            if (!(eh > 0.0))
                throw ConfigError("dgp: generated expected hours not positive at row " +
                                  std::to_string(i + 1));
            vl[j] = cfg.zero_systematic ? 0.0 : ew / eh;
            double v = vl[j];
            if (!cfg.zero_systematic)
                for (int c = 0; c < kz; ++c) v += cfg.beta(j, c) * z[c];
            y[j] = v + u[j];
        }

        int best = 0, second = 1;
        for (int j = 1; j < J; ++j)
            if (y[j] > y[best]) best = j;
        second = (best == 0) ? 1 : 0;
        for (int j = 0; j < J; ++j)
            if (j != best && y[j] > y[second]) second = j;

        double xg = cfg.tau[best];
        for (int c = 0; c < cfg.num_x; ++c) xg += cfg.gamma[c] * x[c];
        const int m = (xg + eps > 0.0) ? 1 : 0;

        // Realized labor outcomes for the chosen alternative.
        double ew_c = cfg.first_stage.kappa_w[best];
        double eh_c = cfg.first_stage.kappa_h[best];
        for (int c = 0; c < kz; ++c) {
            ew_c += cfg.first_stage.delta_w[c] * z[c];
            eh_c += cfg.first_stage.delta_h[c] * z[c];
        }
        for (int c = 0; c < cfg.num_zext; ++c) {
            ew_c += cfg.first_stage.lambda_w[c] * zext[c];
            eh_c += cfg.first_stage.lambda_h[c] * zext[c];
        }
        const double earnings = ew_c + cfg.first_stage.sd_w * noise_w;
        const double hours = eh_c + cfg.first_stage.sd_h * noise_h;

        std::size_t col = 0;
        for (int c = 0; c < kz; ++c) ds.columns[col++][i] = z[c];
        for (int c = 0; c < cfg.num_x; ++c) ds.columns[col++][i] = x[c];
        for (int c = 0; c < cfg.num_zext; ++c) ds.columns[col++][i] = zext[c];
        ds.columns[col++][i] = earnings;
        ds.columns[col++][i] = hours;
        if (cfg.emit_group) ds.columns[col++][i] = group;
        ds.columns[col++][i] = best + 1;
        ds.columns[col++][i] = m;
        ds.choice[i] = best + 1;
        ds.outcome[i] = m;

        truth.eps[i] = eps;
        for (int j = 0; j < J; ++j) {
            truth.u(i, j) = u[j];
            truth.y(i, j) = y[j];
            truth.vl_true(i, j) = vl[j];
        }
        truth.chosen[i] = best + 1;
        truth.second_place[i] = second + 1;
        truth.xi[i] = y[second] - u[best];
    }

    ds.record_exclusions();
    return SimulatedData{std::move(ds), std::move(truth)};
}

MomentReport empirical_moments(const Dataset& ds, const TruthRecord& truth) {
    const std::size_t n = truth.eps.size();
    if (ds.n() != n) throw ShapeError("empirical_moments: dataset and truth record differ in rows");
    if (n == 0) throw DataError("empirical_moments: no rows");
    const int J = static_cast<int>(truth.u.cols());

    MomentReport r;
    r.counts.assign(J, 0);
    r.choice_shares.assign(J, 0.0);
    r.cross_moment.assign(J, 0.0);
    r.cross_moment_se.assign(J, 0.0);
    r.cov_eps_u.assign(J, 0.0);
    r.cov_eps_u_se.assign(J, 0.0);
    r.second_place_freq = Matrix(J, J);

    std::vector<double> sumsq(J, 0.0);
    double mean_eps = 0.0, mean_xi = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const int c = truth.chosen[i] - 1;
        const double t = truth.eps[i] * truth.xi[i];
        r.counts[c]++;
        r.cross_moment[c] += t;
        sumsq[c] += t * t;
        r.second_place_freq(c, truth.second_place[i] - 1) += 1.0;
        mean_eps += truth.eps[i];
        mean_xi += truth.xi[i];
    }
    mean_eps /= n;
    mean_xi /= n;
    for (int c = 0; c < J; ++c) {
        const double m = r.counts[c] ? r.cross_moment[c] / r.counts[c] : 0.0;
        r.cross_moment[c] = m;
        if (r.counts[c] > 1) {
            const double var = sumsq[c] / r.counts[c] - m * m;
            r.cross_moment_se[c] = std::sqrt(std::max(var, 0.0) / r.counts[c]);
        }
        r.choice_shares[c] = static_cast<double>(r.counts[c]) / n;
        for (int j = 0; j < J; ++j)
            if (r.counts[c]) r.second_place_freq(c, j) /= r.counts[c];
    }

    double cp = 0.0, cp2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double t = (truth.eps[i] - mean_eps) * (truth.xi[i] - mean_xi);
        cp += t;
        cp2 += t * t;
    }
    r.pooled_cov = cp / n;
    r.pooled_cov_se = std::sqrt(std::max(cp2 / n - r.pooled_cov * r.pooled_cov, 0.0) / n);

    for (int j = 0; j < J; ++j) {
        double mu = 0.0;
        for (std::size_t i = 0; i < n; ++i) mu += truth.u(i, j);
        mu /= n;
        double c1 = 0.0, c2 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double t = (truth.eps[i] - mean_eps) * (truth.u(i, j) - mu);
            c1 += t;
            c2 += t * t;
        }
        r.cov_eps_u[j] = c1 / n;
        r.cov_eps_u_se[j] = std::sqrt(std::max(c2 / n - r.cov_eps_u[j] * r.cov_eps_u[j], 0.0) / n);
    }
    return r;
}

DgpConfig default_dgp_config(std::size_t n, int J, std::uint64_t seed) {
    DgpConfig cfg;
    cfg.n = n;
    cfg.J = J;
    cfg.num_z = 1;
    cfg.num_x = 1;
    cfg.num_zext = 1;
    cfg.beta = Matrix(J, 2);
    for (int j = 1; j < J; ++j) {
        cfg.beta(j, 0) = -0.15 * j;  // alternative intercepts, offsetting the wage spread
        cfg.beta(j, 1) = (j % 2) ? 0.5 : -0.4;
    }
    cfg.gamma = {0.8};
    cfg.tau.resize(J);
    for (int j = 0; j < J; ++j) cfg.tau[j] = -0.3 + 0.25 * j;
    cfg.latent.rho_star.assign(J, 0.0);
    cfg.latent.exch_corr = 0.0;
    cfg.first_stage = default_first_stage_truth(J, cfg.num_z, cfg.num_zext);
    cfg.seed = seed;
    return cfg;
}

}  // namespace polycop
