#pragma once

#include <cstddef>
#include <vector>

#include "puedet/errors.hpp"

namespace puedet {

using Vector = std::vector<double>;

// Dense row-major matrix of doubles. Dimensions are fixed at construction.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double value = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, value) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t size() const { return data_.size(); }

    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }

    void fill(double v) { data_.assign(data_.size(), v); }

    bool same_shape(const Matrix& o) const { return rows_ == o.rows_ && cols_ == o.cols_; }

    bool operator==(const Matrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

// out += W x
void matvec_add(const Matrix& w, const double* x, Vector& out);
// out += Wᵀ y
void tmatvec_add(const Matrix& w, const Vector& y, Vector& out);
// g += d xᵀ
void add_outer(Matrix& g, const Vector& d, const double* x);
// y = W x
Vector matvec(const Matrix& w, const Vector& x);

double dot(const Vector& a, const Vector& b);

// Column-vector helpers for parameters stored as n×1 matrices.
void add_column(const Matrix& b, Vector& out);       // out += b
void add_to_column(Matrix& gb, const Vector& d);     // gb += d

}  // namespace puedet
