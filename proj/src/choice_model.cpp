#include "polycop/choice_model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "polycop/errors.hpp"
#include "polycop/normal.hpp"

namespace polycop {

namespace {
constexpr double kProbFloor = 1e-12;
}

std::vector<double> ChoiceParams::flatten() const {
    std::vector<double> theta;
    theta.reserve((beta.rows() - 1) * beta.cols());
    for (std::size_t j = 0; j < beta.rows(); ++j) {
        if (static_cast<int>(j) == base_alt - 1) continue;
        for (std::size_t c = 0; c < beta.cols(); ++c) theta.push_back(beta(j, c));
    }
    return theta;
}

void ChoiceParams::unflatten(const std::vector<double>& theta) {
    if (theta.size() != (beta.rows() - 1) * beta.cols())
        throw ShapeError("ChoiceParams: parameter vector length mismatch");
    std::size_t t = 0;
    for (std::size_t j = 0; j < beta.rows(); ++j) {
        if (static_cast<int>(j) == base_alt - 1) {
            for (std::size_t c = 0; c < beta.cols(); ++c) beta(j, c) = 0.0;
            continue;
        }
        for (std::size_t c = 0; c < beta.cols(); ++c) beta(j, c) = theta[t++];
    }
}

void ChoiceParams::validate() const {
    if (num_alternatives() < 2) throw DomainError("ChoiceParams: need at least two alternatives");
    if (base_alt < 1 || base_alt > num_alternatives())
        throw DomainError("ChoiceParams: base alternative out of range");
    for (std::size_t c = 0; c < beta.cols(); ++c)
        if (beta(base_alt - 1, c) != 0.0)
            throw DomainError("ChoiceParams: base-alternative block must stay zero");
}

ChoiceParams make_choice_params(int J, int kz, int base_alt, KernelType kernel,
                                const GhkConfig& ghk) {
    ChoiceParams p;
    p.beta = Matrix(J, kz);
    p.base_alt = base_alt;
    p.kernel = kernel;
    p.ghk = ghk;
    return p;
}

namespace {

UtilitySpec utilities_for_row(const ChoiceParams& params, const ModelData& data, std::size_t row,
                              int chosen, double exch_corr) {
    const int J = params.num_alternatives();
    UtilitySpec spec;
    spec.systematic.resize(J);
    spec.chosen = chosen;
    spec.exch_corr = exch_corr;
    for (int j = 0; j < J; ++j) {
        double v = data.vl(row, j);  // wage coefficient normalized to one
        for (std::size_t c = 0; c < params.beta.cols(); ++c)
            v += params.beta(j, c) * data.z(row, c);
        spec.systematic[j] = v;
    }
    return spec;
}

}  // namespace

std::vector<double> choice_prob_row(const ChoiceParams& params, const ModelData& data,
                                    std::size_t row) {
    const int J = params.num_alternatives();
    std::vector<double> probs(J);
    UtilitySpec spec = utilities_for_row(params, data, row, 1, params.exch_corr);
    if (params.kernel == KernelType::logit) {
        const double vmax = *std::max_element(spec.systematic.begin(), spec.systematic.end());
        double denom = 0.0;
        for (int j = 0; j < J; ++j) {
            probs[j] = std::exp(spec.systematic[j] - vmax);
            denom += probs[j];
        }
        for (int j = 0; j < J; ++j) probs[j] /= denom;
    } else {
        const RngStream stream{derive_stream(params.ghk.master_seed, stream_purpose::kGhk), row};
        for (int j = 0; j < J; ++j) {
            spec.chosen = j + 1;
            probs[j] = mnp_choice_prob(spec, params.ghk, stream);
        }
    }
    return probs;
}

std::vector<double> per_row_choice_loglik(const ChoiceParams& params, const ModelData& data) {
    params.validate();
    data.validate();
    const std::size_t n = data.n();
    std::vector<double> ll(n);
    for (std::size_t i = 0; i < n; ++i) {
        const UtilitySpec spec =
            utilities_for_row(params, data, i, data.choice[i], params.exch_corr);
        double p;
        if (params.kernel == KernelType::logit) {
            p = mnl_choice_prob(spec);
        } else {
            const RngStream stream{derive_stream(params.ghk.master_seed, stream_purpose::kGhk), i};
            p = mnp_choice_prob(spec, params.ghk, stream);
        }
        ll[i] = std::log(std::max(p, kProbFloor));
    }
    return ll;
}

double choice_loglik(const ChoiceParams& params, const ModelData& data) {
    const auto ll = per_row_choice_loglik(params, data);
    double total = 0.0;
    for (double v : ll) total += v;  // fixed index order
    return total;
}

ChoiceFit fit_choice(const ModelData& data, const ChoiceParams& init, const OptimOptions& opts) {
    init.validate();
    data.validate();
    const int J = init.num_alternatives();

    // Degenerate cells make the block unidentified.
    std::vector<int> counts(J, 0);
    for (int c : data.choice) counts[c - 1]++;
    for (int j = 0; j < J; ++j)
        if (counts[j] == 0)
            throw SpecificationError("fit_choice: alternative " + std::to_string(j + 1) +
                                     " is never chosen; its coefficient block is not identified");

    ChoiceParams params = init;
    std::vector<double> start = params.flatten();

    // Cheap closed-form seed for the simulated fit.
    if (params.kernel == KernelType::probit) {
        ChoiceParams mnl = params;
        mnl.kernel = KernelType::logit;
        const auto seed_fit = fit_choice(data, mnl, opts);
        start = seed_fit.params.flatten();
    }

    auto objective = [&](const std::vector<double>& theta) {
        ChoiceParams p = params;
        p.unflatten(theta);
        return -choice_loglik(p, data);
    };
    const OptimResult opt = minimize_bfgs(objective, start, opts);

    ChoiceFit fit;
    fit.params = params;
    fit.params.unflatten(opt.x);
    fit.loglik = -opt.value;
    fit.gradient_norm = opt.gradient_norm;
    fit.iterations = opt.iterations;
    fit.converged = opt.converged;
    fit.seed_record = RngStream{params.ghk.master_seed, 0};

    // Runaway coefficients signal (near-)perfect separation.
    double worst = 0.0;
    std::size_t worst_col = 0;
    for (std::size_t j = 0; j < fit.params.beta.rows(); ++j)
        for (std::size_t c = 0; c < fit.params.beta.cols(); ++c)
            if (std::fabs(fit.params.beta(j, c)) > worst) {
                worst = std::fabs(fit.params.beta(j, c));
                worst_col = c;
            }
    if (worst > 30.0) {
        fit.separation_flag = true;
        fit.separation_detail = "coefficient on choice covariate " + std::to_string(worst_col + 1) +
                                " diverged (|" + std::to_string(worst) +
                                "| > 30); an alternative may be perfectly predicted";
    }
    return fit;
}

}  // namespace polycop
