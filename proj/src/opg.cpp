#include "polycop/opg.hpp"

#include <Eigen/Dense>

#include "polycop/errors.hpp"

namespace polycop {

namespace {

Eigen::MatrixXd to_eigen(const Matrix& m) {
    Eigen::MatrixXd e(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) e(i, j) = m(i, j);
    return e;
}

Matrix from_eigen(const Eigen::MatrixXd& e) {
    Matrix m(e.rows(), e.cols());
    for (Eigen::Index i = 0; i < e.rows(); ++i)
        for (Eigen::Index j = 0; j < e.cols(); ++j) m(i, j) = e(i, j);
    return m;
}

}  // namespace

OpgResult invert_psd(const Matrix& m) {
    if (m.rows() != m.cols()) throw ShapeError("invert_psd: matrix must be square");
    const Eigen::MatrixXd a = to_eigen(m);
    const Eigen::Index p = a.rows();

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    const double tol = sv.size() ? sv(0) * p * 1e-12 : 0.0;
    int rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > tol) ++rank;

    OpgResult out;
    out.rank = rank;
    if (rank == p) {
        Eigen::LDLT<Eigen::MatrixXd> ldlt(a);
        if (ldlt.info() == Eigen::Success && ldlt.isPositive()) {
            out.cov = from_eigen(ldlt.solve(Eigen::MatrixXd::Identity(p, p)));
            out.pseudo = false;
            return out;
        }
    }
    Eigen::VectorXd inv = Eigen::VectorXd::Zero(sv.size());
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > tol) inv(i) = 1.0 / sv(i);
    out.cov = from_eigen(svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose());
    out.pseudo = true;
    return out;
}

OpgResult opg_covariance(const Matrix& per_row_gradients) {
    const std::size_t n = per_row_gradients.rows();
    const std::size_t p = per_row_gradients.cols();
    if (n == 0 || p == 0) throw ShapeError("opg_covariance: empty gradient matrix");

    Matrix outer(p, p);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t a = 0; a < p; ++a) {
            const double ga = per_row_gradients(i, a);
            if (ga == 0.0) continue;
            for (std::size_t b = 0; b < p; ++b) outer(a, b) += ga * per_row_gradients(i, b);
        }

    OpgResult out = invert_psd(outer);
    if (n <= p) out.pseudo = true;  // too few rows for a full-rank score matrix
    return out;
}

}  // namespace polycop
