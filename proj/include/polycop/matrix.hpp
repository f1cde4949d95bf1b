#pragma once

#include <cstddef>
#include <vector>

namespace polycop {

// Small dense matrix, row-major storage. Row-major order is part of the
// serialization contract for fixtures, so it is fixed here rather than
// delegated to a linear algebra backend.
class Matrix {
  public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static Matrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    const std::vector<double>& data() const { return data_; }
    std::vector<double>& data() { return data_; }

  private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

Matrix matmul(const Matrix& a, const Matrix& b);
Matrix transpose(const Matrix& a);
std::vector<double> matvec(const Matrix& a, const std::vector<double>& x);

bool is_symmetric(const Matrix& a, double tol);

// Lower-triangular L with L * L' = sigma. Requires a symmetric positive
// definite input; throws DecompositionError naming the failing pivot
// otherwise.
Matrix cholesky(const Matrix& sigma);

}  // namespace polycop
