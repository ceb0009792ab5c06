#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace nngmix {

/// Dense row-major matrix of doubles. Row views are spans into the
/// underlying storage; the matrix owns its data.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double value = 0.0);

    static Matrix from_rows(const std::vector<std::vector<double>>& rows);
    static Matrix identity(std::size_t n);

    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }

    std::span<const double> row(std::size_t r) const {
        return {data_.data() + r * cols_, cols_};
    }
    std::span<double> row(std::size_t r) {
        return {data_.data() + r * cols_, cols_};
    }

    /// Appends one row. On an empty matrix this fixes the column count.
    void append_row(std::span<const double> values);

    void reserve_rows(std::size_t n) { data_.reserve(n * cols_); }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return rows_ == 0; }

    const std::vector<double>& data() const { return data_; }
    std::vector<double>& data() { return data_; }

    bool all_finite() const;

    bool operator==(const Matrix& other) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

/// Stacks two matrices vertically. Either side may be empty (0 rows).
Matrix vstack(const Matrix& top, const Matrix& bottom);

double dot(std::span<const double> a, std::span<const double> b);
double squared_distance(std::span<const double> a, std::span<const double> b);
double euclidean_distance(std::span<const double> a, std::span<const double> b);

/// Column means of a matrix (requires at least one row).
std::vector<double> column_means(const Matrix& m);

struct SymmetricEigen {
    std::vector<double> values; // descending
    Matrix vectors;             // column j is the eigenvector for values[j]
};

/// Full eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.
SymmetricEigen symmetric_eigen(const Matrix& m);

} // namespace nngmix
