#include "polycop/first_stage.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "polycop/errors.hpp"

namespace polycop {

OlsFit fit_ols(const Matrix& design, const std::vector<double>& response,
               const std::vector<std::string>* column_names) {
    const std::size_t n = design.rows();
    const std::size_t p = design.cols();
    if (response.size() != n) throw ShapeError("fit_ols: response length does not match design");
    if (n < p)
        throw DecompositionError("fit_ols: fewer rows (" + std::to_string(n) +
                                 ") than columns (" + std::to_string(p) + ")");

    Eigen::MatrixXd X(n, p);
    Eigen::VectorXd y(n);
    for (std::size_t i = 0; i < n; ++i) {
        y(i) = response[i];
        for (std::size_t j = 0; j < p; ++j) X(i, j) = design(i, j);
    }

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
    qr.setThreshold(1e-10);
    if (static_cast<std::size_t>(qr.rank()) < p) {
        // The trailing pivots identify the columns in the collinear span.
        std::string names;
        const auto perm = qr.colsPermutation().indices();
        for (Eigen::Index k = qr.rank(); k < static_cast<Eigen::Index>(p); ++k) {
            const int col = perm(k);
            if (!names.empty()) names += ", ";
            names += column_names ? (*column_names)[col] : ("column " + std::to_string(col + 1));
        }
        throw DecompositionError("fit_ols: design is rank deficient (rank " +
                                 std::to_string(qr.rank()) + " of " + std::to_string(p) +
                                 "); collinear: " + names);
    }

    const Eigen::VectorXd beta = qr.solve(y);
    const Eigen::VectorXd resid = y - X * beta;
    const double rss = resid.squaredNorm();

    OlsFit fit;
    fit.n = n;
    fit.coef.assign(beta.data(), beta.data() + p);
    fit.residual_variance = (n > p) ? rss / (n - p) : 0.0;

    const Eigen::MatrixXd R = qr.matrixR().topLeftCorner(p, p).template triangularView<Eigen::Upper>();
    double dmax = 0.0, dmin = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < p; ++j) {
        const double d = std::fabs(R(j, j));
        dmax = std::max(dmax, d);
        dmin = std::min(dmin, d);
    }
    fit.condition_number = dmin > 0.0 ? dmax / dmin : std::numeric_limits<double>::infinity();

    const Eigen::MatrixXd xtx_inv =
        (X.transpose() * X).ldlt().solve(Eigen::MatrixXd::Identity(p, p));
    fit.se.resize(p);
    for (std::size_t j = 0; j < p; ++j)
        fit.se[j] = std::sqrt(std::max(fit.residual_variance * xtx_inv(j, j), 0.0));
    return fit;
}

double FirstStageModel::predict(const std::vector<double>& z, int alternative,
                                const std::vector<double>& zext) const {
    double v = kappa.at(alternative - 1);
    for (std::size_t c = 0; c < delta.size(); ++c) v += delta[c] * z[c];
    for (std::size_t c = 0; c < lambda.size(); ++c) v += lambda[c] * zext[c];
    return v;
}

FirstStageModel fit_first_stage(const Dataset& ds, const std::string& response_col) {
    const int J = ds.num_alternatives;
    const std::size_t kz = ds.schema.z_cols.size();
    const std::size_t ke = ds.schema.zext_cols.size();
    const std::size_t p = kz + J + ke;

    Matrix design(ds.n(), p);
    std::vector<std::string> names;
    names.reserve(p);
    for (std::size_t c = 0; c < kz; ++c) {
        const auto& col = ds.col(ds.schema.z_cols[c]);
        for (std::size_t i = 0; i < ds.n(); ++i) design(i, c) = col[i];
        names.push_back(ds.schema.z_cols[c]);
    }
    for (int j = 0; j < J; ++j) {
        for (std::size_t i = 0; i < ds.n(); ++i)
            design(i, kz + j) = (ds.choice[i] == j + 1) ? 1.0 : 0.0;
        names.push_back("alt" + std::to_string(j + 1));
    }
    for (std::size_t c = 0; c < ke; ++c) {
        const auto& col = ds.col(ds.schema.zext_cols[c]);
        for (std::size_t i = 0; i < ds.n(); ++i) design(i, kz + J + c) = col[i];
        names.push_back(ds.schema.zext_cols[c]);
    }

    const OlsFit ols = fit_ols(design, ds.col(response_col), &names);

    FirstStageModel m;
    m.delta.assign(ols.coef.begin(), ols.coef.begin() + kz);
    m.kappa.assign(ols.coef.begin() + kz, ols.coef.begin() + kz + J);
    m.lambda.assign(ols.coef.begin() + kz + J, ols.coef.end());
    m.residual_variance = ols.residual_variance;
    m.condition_number = ols.condition_number;
    return m;
}

ExpectedLaborOutcomes predict_counterfactuals(const FirstStageModel& model_w,
                                              const FirstStageModel& model_h,
                                              const std::vector<double>& z,
                                              const std::vector<double>& zext,
                                              std::size_t individual_index) {
    const int J = static_cast<int>(model_w.kappa.size());
    ExpectedLaborOutcomes out;
    out.expected_earnings.resize(J);
    out.expected_hours.resize(J);
    out.normalized_wage.resize(J);
    for (int j = 1; j <= J; ++j) {
        const double w = model_w.predict(z, j, zext);
        const double h = model_h.predict(z, j, zext);
        if (!(h > 0.0))
            throw SpecificationError(
                "predict_counterfactuals: predicted working hours not positive for individual " +
                std::to_string(individual_index + 1) + ", alternative " + std::to_string(j));
        out.expected_earnings[j - 1] = w;
        out.expected_hours[j - 1] = h;
        out.normalized_wage[j - 1] = w / h;
    }
    return out;
}

Matrix predict_wage_matrix(const FirstStageModel& model_w, const FirstStageModel& model_h,
                           const Dataset& ds) {
    const int J = static_cast<int>(model_w.kappa.size());
    Matrix vl(ds.n(), J);
    std::vector<double> z(ds.schema.z_cols.size()), zext(ds.schema.zext_cols.size());
    for (std::size_t i = 0; i < ds.n(); ++i) {
        for (std::size_t c = 0; c < z.size(); ++c) z[c] = ds.col(ds.schema.z_cols[c])[i];
        for (std::size_t c = 0; c < zext.size(); ++c) zext[c] = ds.col(ds.schema.zext_cols[c])[i];
        const auto cf = predict_counterfactuals(model_w, model_h, z, zext, i);
        for (int j = 0; j < J; ++j) vl(i, j) = cf.normalized_wage[j];
    }
    return vl;
}

}  // namespace polycop
