#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace oscquad {

/// Dense row-major matrix of doubles. Sized for operators of order a few
/// hundred, so products are plain triple loops with a fixed reduction order.
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static DenseMatrix identity(std::size_t n) {
        DenseMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::span<const double> row(std::size_t i) const {
        return {data_.data() + i * cols_, cols_};
    }

    DenseMatrix& operator+=(const DenseMatrix& other) {
        require_same_shape(other);
        for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += other.data_[k];
        return *this;
    }

    DenseMatrix& operator-=(const DenseMatrix& other) {
        require_same_shape(other);
        for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= other.data_[k];
        return *this;
    }

    friend DenseMatrix operator+(DenseMatrix lhs, const DenseMatrix& rhs) {
        lhs += rhs;
        return lhs;
    }

    friend DenseMatrix operator-(DenseMatrix lhs, const DenseMatrix& rhs) {
        lhs -= rhs;
        return lhs;
    }

    /// Matrix product; the k-sum runs in ascending order per output entry.
    friend DenseMatrix operator*(const DenseMatrix& lhs, const DenseMatrix& rhs) {
        if (lhs.cols_ != rhs.rows_)
            throw std::invalid_argument("DenseMatrix: product shape mismatch");
        DenseMatrix out(lhs.rows_, rhs.cols_);
        for (std::size_t i = 0; i < lhs.rows_; ++i) {
            for (std::size_t k = 0; k < lhs.cols_; ++k) {
                const double aik = lhs(i, k);
                const double* brow = rhs.data_.data() + k * rhs.cols_;
                double* orow = out.data_.data() + i * out.cols_;
                for (std::size_t j = 0; j < rhs.cols_; ++j) orow[j] += aik * brow[j];
            }
        }
        return out;
    }

    /// y = M x
    std::vector<double> apply(std::span<const double> x) const {
        if (x.size() != cols_)
            throw std::invalid_argument("DenseMatrix: apply size mismatch");
        std::vector<double> y(rows_, 0.0);
        for (std::size_t i = 0; i < rows_; ++i) {
            double s = 0.0;
            const double* r = data_.data() + i * cols_;
            for (std::size_t j = 0; j < cols_; ++j) s += r[j] * x[j];
            y[i] = s;
        }
        return y;
    }

    /// y = M^T x, accumulated over rows in ascending order.
    std::vector<double> apply_transposed(std::span<const double> x) const {
        if (x.size() != rows_)
            throw std::invalid_argument("DenseMatrix: apply_transposed size mismatch");
        std::vector<double> y(cols_, 0.0);
        for (std::size_t i = 0; i < rows_; ++i) {
            const double xi = x[i];
            const double* r = data_.data() + i * cols_;
            for (std::size_t j = 0; j < cols_; ++j) y[j] += r[j] * xi;
        }
        return y;
    }

    /// Maximum absolute row sum.
    double inf_norm() const {
        double best = 0.0;
        for (std::size_t i = 0; i < rows_; ++i) {
            double s = 0.0;
            const double* r = data_.data() + i * cols_;
            for (std::size_t j = 0; j < cols_; ++j) s += std::abs(r[j]);
            if (s > best) best = s;
        }
        return best;
    }

private:
    void require_same_shape(const DenseMatrix& other) const {
        if (rows_ != other.rows_ || cols_ != other.cols_)
            throw std::invalid_argument("DenseMatrix: shape mismatch");
    }

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

} // namespace oscquad
