#include "polycop/joint_model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "polycop/errors.hpp"
#include "polycop/normal.hpp"
#include "polycop/opg.hpp"

namespace polycop {

namespace {
constexpr double kProbFloor = 1e-12;
constexpr double kIntegrationLower = -8.0;
// The transform saturates to +-1 in double precision for |raw| beyond ~37;
// the likelihood clamps correlations just inside the open interval instead.
constexpr double kRhoCap = 1.0 - 1e-10;
}  // namespace

double rho_transform(double raw) {
    // (1 - e^r) / (1 + e^r), computed stably on both sides.
    if (raw >= 0.0) {
        const double e = std::exp(-raw);
        return (e - 1.0) / (e + 1.0);
    }
    const double e = std::exp(raw);
    return (1.0 - e) / (1.0 + e);
}

double rho_transform_inverse(double rho) {
    if (!(rho > -1.0 && rho < 1.0))
        throw DomainError("rho_transform_inverse: correlation must lie in (-1,1)");
    return std::log((1.0 - rho) / (1.0 + rho));
}

std::vector<double> JointParams::rho() const {
    std::vector<double> out(rho_raw.size());
    for (std::size_t j = 0; j < rho_raw.size(); ++j) out[j] = rho_transform(rho_raw[j]);
    return out;
}

std::vector<double> JointParams::flatten() const {
    std::vector<double> theta;
    theta.reserve(gamma.size() + tau.size() + rho_raw.size());
    theta.insert(theta.end(), gamma.begin(), gamma.end());
    theta.insert(theta.end(), tau.begin(), tau.end());
    theta.insert(theta.end(), rho_raw.begin(), rho_raw.end());
    return theta;
}

void JointParams::unflatten(const std::vector<double>& theta) {
    if (theta.size() != gamma.size() + tau.size() + rho_raw.size())
        throw ShapeError("JointParams: parameter vector length mismatch");
    std::size_t t = 0;
    for (auto& v : gamma) v = theta[t++];
    for (auto& v : tau) v = theta[t++];
    for (auto& v : rho_raw) v = theta[t++];
}

double prob_unmarried_and_major(double margin, double f2, double rho,
                                const QuadratureRule& rule) {
    if (!(f2 > 0.0 && f2 < 1.0))
        throw DomainError("prob_unmarried_and_major: choice probability must lie in (0,1)");
    rho = std::clamp(rho, -kRhoCap, kRhoCap);
    const double upper = -margin;
    if (upper <= kIntegrationLower) return 0.0;
    const double u_eff = std::min(upper, -kIntegrationLower);
    const double q = std_normal_quantile(f2);
    const double s = std::sqrt((1.0 - rho) * (1.0 + rho));

    // Near |rho| = 1 the inner CDF is a near-step in the integration
    // variable; splitting at its center keeps the node clustering where the
    // transition happens.
    double split = u_eff;
    bool two_panels = false;
    if (std::fabs(rho) > 0.9) {
        const double t0 = q / rho;
        if (t0 > kIntegrationLower && t0 < u_eff) {
            split = t0;
            two_panels = true;
        }
    }

    auto panel = [&](double a, double b) {
        const double mid = 0.5 * (a + b);
        const double half = 0.5 * (b - a);
        double acc = 0.0;
        for (std::size_t k = 0; k < rule.size(); ++k) {
            const double t = mid + half * rule.nodes[k];
            acc += rule.weights[k] * std_normal_pdf(t) * std_normal_cdf((q - rho * t) / s);
        }
        return half * acc;
    };

    double p = two_panels ? panel(kIntegrationLower, split) + panel(split, u_eff)
                          : panel(kIntegrationLower, u_eff);
    return std::clamp(p, 0.0, 1.0);
}

double prob_married_and_major(double margin, double f2, double rho, const QuadratureRule& rule) {
    const double p0 = prob_unmarried_and_major(margin, f2, rho, rule);
    const double p1 = f2 - p0;
    if (p1 < -1e-12)
        throw InternalConsistencyError(
            "prob_married_and_major: joint probability exceeds the choice probability by " +
            std::to_string(-p1));
    return std::max(p1, 0.0);
}

std::vector<double> per_row_joint_loglik(const JointParams& params, const ModelData& data,
                                         const std::vector<double>& f2_cache,
                                         const QuadratureRule& rule) {
    const std::size_t n = data.n();
    if (f2_cache.size() != n)
        throw ShapeError("joint_loglik: F2 cache not aligned with data rows");
    if (params.gamma.size() != data.x.cols())
        throw ShapeError("joint_loglik: gamma length does not match outcome design");
    if (params.num_alternatives() != data.J)
        throw ShapeError("joint_loglik: tau/rho length does not match alternatives");

    const std::vector<double> rho = params.rho();
    std::vector<double> ll(n);
    for (std::size_t i = 0; i < n; ++i) {
        const int c = data.choice[i] - 1;
        double margin = params.tau[c];
        for (std::size_t k = 0; k < params.gamma.size(); ++k)
            margin += params.gamma[k] * data.x(i, k);
        const double p0 = prob_unmarried_and_major(margin, f2_cache[i], rho[c], rule);
        const double p = data.outcome[i] ? (f2_cache[i] - p0) : p0;
        ll[i] = std::log(std::max(p, kProbFloor));
    }
    return ll;
}

double joint_loglik(const JointParams& params, const ModelData& data,
                    const std::vector<double>& f2_cache, const QuadratureRule& rule) {
    const auto ll = per_row_joint_loglik(params, data, f2_cache, rule);
    double total = 0.0;
    for (double v : ll) total += v;
    return total;
}

std::vector<double> build_f2_cache(const ChoiceParams& params, const ModelData& data) {
    const auto ll = per_row_choice_loglik(params, data);
    std::vector<double> f2(ll.size());
    for (std::size_t i = 0; i < ll.size(); ++i)
        f2[i] = std::clamp(std::exp(ll[i]), kProbFloor, 1.0 - kProbFloor);
    return f2;
}

JointParams make_joint_init(const ModelData& data) {
    JointParams p;
    p.gamma.assign(data.x.cols(), 0.0);
    p.tau.assign(data.J, 0.0);
    p.rho_raw.assign(data.J, 0.0);
    std::vector<int> total(data.J, 0), married(data.J, 0);
    for (std::size_t i = 0; i < data.n(); ++i) {
        total[data.choice[i] - 1]++;
        married[data.choice[i] - 1] += data.outcome[i];
    }
    for (int j = 0; j < data.J; ++j) {
        const double share =
            total[j] ? (married[j] + 0.5) / (total[j] + 1.0) : 0.5;  // shrunk away from 0/1
        p.tau[j] = std_normal_quantile(share);
    }
    return p;
}

namespace {

// Delta-method derivative of the transform: d rho / d raw = -(1 - rho^2)/2.
double rho_transform_deriv(double raw) {
    const double r = rho_transform(raw);
    return -0.5 * (1.0 - r * r);
}

}  // namespace

FitResult fit_joint(const ModelData& data, const ChoiceFit& step1, const JointParams& init,
                    const JointFitConfig& cfg) {
    data.validate();
    if (init.num_alternatives() != data.J)
        throw ShapeError("fit_joint: init tau/rho length must equal the number of alternatives");
    if (init.gamma.size() != data.x.cols())
        throw ShapeError("fit_joint: init gamma length must match the outcome design");

    // All J alternative effects are estimated, so a constant column in x
    // would be collinear with them.
    for (std::size_t c = 0; c < data.x.cols(); ++c) {
        const double first = data.x(0, c);
        bool constant = true;
        for (std::size_t i = 1; i < data.n(); ++i)
            if (data.x(i, c) != first) {
                constant = false;
                break;
            }
        if (constant)
            throw SpecificationError("fit_joint: outcome design column " + std::to_string(c + 1) +
                                     " is constant; the alternative effects already span an "
                                     "intercept");
    }

    const QuadratureRule rule = gauss_legendre(cfg.quad_order);

    FitResult out;
    out.mode = cfg.mode;
    out.quad_order = cfg.quad_order;
    out.beta = step1.params;
    out.seed = step1.params.ghk.master_seed;

    JointParams work = init;
    OptimResult opt;
    if (cfg.mode == FitMode::two_step) {
        const std::vector<double> f2 = build_f2_cache(step1.params, data);
        auto objective = [&](const std::vector<double>& theta) {
            JointParams p = work;
            p.unflatten(theta);
            return -joint_loglik(p, data, f2, rule);
        };
        opt = minimize_bfgs(objective, work.flatten(), cfg.optim);
        work.unflatten(opt.x);
    } else {
        // Full mode re-optimizes the choice block under common random
        // numbers; theta = [beta | gamma | tau | rho_raw].
        ChoiceParams beta_work = step1.params;
        const std::vector<double> beta0 = beta_work.flatten();
        const std::size_t pb = beta0.size();
        std::vector<double> theta0 = beta0;
        const std::vector<double> j0 = work.flatten();
        theta0.insert(theta0.end(), j0.begin(), j0.end());

        auto objective = [&](const std::vector<double>& theta) {
            ChoiceParams b = beta_work;
            b.unflatten(std::vector<double>(theta.begin(), theta.begin() + pb));
            JointParams p = work;
            p.unflatten(std::vector<double>(theta.begin() + pb, theta.end()));
            const std::vector<double> f2 = build_f2_cache(b, data);
            return -joint_loglik(p, data, f2, rule);
        };
        opt = minimize_bfgs(objective, theta0, cfg.optim);
        beta_work.unflatten(std::vector<double>(opt.x.begin(), opt.x.begin() + pb));
        work.unflatten(std::vector<double>(opt.x.begin() + pb, opt.x.end()));
        out.beta = beta_work;
    }

    out.params = work;
    out.rho = work.rho();
    out.loglik = -opt.value;
    out.gradient_norm = opt.gradient_norm;
    out.iterations = opt.iterations;
    out.converged = opt.converged;

    // OPG covariance of (gamma, tau, rho_raw) at the optimum, with beta held
    // at its estimate; the rho block is mapped through the transform.
    const std::vector<double> f2 = build_f2_cache(out.beta, data);
    const std::vector<double> theta_hat = work.flatten();
    const std::size_t p = theta_hat.size();
    const std::size_t n = data.n();
    Matrix scores(n, p);
    std::vector<double> tp = theta_hat;
    for (std::size_t k = 0; k < p; ++k) {
        const double h = cfg.optim.fd_step * (1.0 + std::fabs(theta_hat[k]));
        JointParams pp = work;
        tp[k] = theta_hat[k] + h;
        pp.unflatten(tp);
        const auto lp = per_row_joint_loglik(pp, data, f2, rule);
        tp[k] = theta_hat[k] - h;
        pp.unflatten(tp);
        const auto lm = per_row_joint_loglik(pp, data, f2, rule);
        tp[k] = theta_hat[k];
        for (std::size_t i = 0; i < n; ++i) scores(i, k) = (lp[i] - lm[i]) / (2.0 * h);
    }
    const OpgResult opg = opg_covariance(scores);
    out.cov_pseudo = opg.pseudo;
    out.opg_rank = opg.rank;

    const std::size_t kx = work.gamma.size();
    const std::size_t J = work.tau.size();
    out.se_gamma.resize(kx);
    out.se_tau.resize(J);
    out.se_rho.resize(J);
    for (std::size_t k = 0; k < kx; ++k) out.se_gamma[k] = std::sqrt(std::max(opg.cov(k, k), 0.0));
    for (std::size_t j = 0; j < J; ++j)
        out.se_tau[j] = std::sqrt(std::max(opg.cov(kx + j, kx + j), 0.0));
    out.rho_cov = Matrix(J, J);
    for (std::size_t a = 0; a < J; ++a) {
        const double da = rho_transform_deriv(work.rho_raw[a]);
        for (std::size_t b = 0; b < J; ++b) {
            const double db = rho_transform_deriv(work.rho_raw[b]);
            out.rho_cov(a, b) = da * db * opg.cov(kx + J + a, kx + J + b);
        }
    }
    for (std::size_t j = 0; j < J; ++j) out.se_rho[j] = std::sqrt(std::max(out.rho_cov(j, j), 0.0));
    return out;
}

}  // namespace polycop
