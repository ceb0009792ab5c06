#include "nngmix/matrix.hpp"

#include "nngmix/common.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace nngmix {

Matrix::Matrix(std::size_t rows, std::size_t cols, double value)
    : rows_(rows), cols_(cols), data_(rows * cols, value) {}

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows) {
    Matrix m;
    for (const auto& r : rows) {
        m.append_row(r);
    }
    return m;
}

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        m(i, i) = 1.0;
    }
    return m;
}

void Matrix::append_row(std::span<const double> values) {
    if (rows_ == 0 && cols_ == 0) {
        cols_ = values.size();
    }
    if (values.size() != cols_) {
        throw DataError("append_row: expected " + std::to_string(cols_) +
                        " values, got " + std::to_string(values.size()));
    }
    data_.insert(data_.end(), values.begin(), values.end());
    ++rows_;
}

bool Matrix::all_finite() const {
    return std::all_of(data_.begin(), data_.end(),
                       [](double v) { return std::isfinite(v); });
}

Matrix vstack(const Matrix& top, const Matrix& bottom) {
    if (top.empty()) return bottom;
    if (bottom.empty()) return top;
    if (top.cols() != bottom.cols()) {
        throw DataError("vstack: column mismatch (" + std::to_string(top.cols()) +
                        " vs " + std::to_string(bottom.cols()) + ")");
    }
    Matrix out = top;
    for (std::size_t i = 0; i < bottom.rows(); ++i) {
        out.append_row(bottom.row(i));
    }
    return out;
}

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        s += a[i] * b[i];
    }
    return s;
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

double euclidean_distance(std::span<const double> a, std::span<const double> b) {
    return std::sqrt(squared_distance(a, b));
}

std::vector<double> column_means(const Matrix& m) {
    if (m.empty()) {
        throw DataError("column_means: empty matrix");
    }
    std::vector<double> mean(m.cols(), 0.0);
    for (std::size_t i = 0; i < m.rows(); ++i) {
        const auto r = m.row(i);
        for (std::size_t j = 0; j < m.cols(); ++j) {
            mean[j] += r[j];
        }
    }
    for (auto& v : mean) {
        v /= static_cast<double>(m.rows());
    }
    return mean;
}

SymmetricEigen symmetric_eigen(const Matrix& input) {
    const std::size_t n = input.rows();
    if (n == 0 || input.cols() != n) {
        throw DataError("symmetric_eigen: matrix must be square and non-empty");
    }
    Matrix a = input;
    Matrix v = Matrix::identity(n);

    auto off_diagonal = [&]() {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                s += a(i, j) * a(i, j);
            }
        }
        return s;
    };

    double scale = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        scale = std::max(scale, std::abs(a(i, i)));
    }
    const double tol = 1e-30 + 1e-24 * scale * scale;

    for (int sweep = 0; sweep < 128 && off_diagonal() > tol; ++sweep) {
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t i = 0; i < n; ++i) {
                    const double aip = a(i, p);
                    const double aiq = a(i, q);
                    a(i, p) = c * aip - s * aiq;
                    a(i, q) = s * aip + c * aiq;
                }
                for (std::size_t i = 0; i < n; ++i) {
                    const double api = a(p, i);
                    const double aqi = a(q, i);
                    a(p, i) = c * api - s * aqi;
                    a(q, i) = s * api + c * aqi;
                }
                for (std::size_t i = 0; i < n; ++i) {
                    const double vip = v(i, p);
                    const double viq = v(i, q);
                    v(i, p) = c * vip - s * viq;
                    v(i, q) = s * vip + c * viq;
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        return a(x, x) > a(y, y);
    });

    SymmetricEigen out;
    out.values.resize(n);
    out.vectors = Matrix(n, n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        out.values[j] = a(order[j], order[j]);
        for (std::size_t i = 0; i < n; ++i) {
            out.vectors(i, j) = v(i, order[j]);
        }
    }
    return out;
}

} // namespace nngmix
