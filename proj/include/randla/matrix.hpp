#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "randla/errors.hpp"

namespace randla {

/// Dense real matrix, row-major storage. Constructors reject empty shapes
/// and non-finite entries; after construction a Matrix is treated as an
/// immutable value and is safe to share across threads.
class Matrix {
  public:
    Matrix(std::size_t rows, std::size_t cols);
    Matrix(std::size_t rows, std::size_t cols, std::vector<double> entries);

    static Matrix identity(std::size_t n);
    static Matrix diagonal(std::span<const double> d);
    static Matrix diagonal(std::size_t rows, std::size_t cols, std::span<const double> d);
    static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows);
    static Matrix from_columns(const std::vector<std::vector<double>>& cols);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }

    const std::vector<double>& data() const { return data_; }
    std::vector<double>& data() { return data_; }

    Matrix transpose() const;
    Matrix multiply(const Matrix& rhs) const;
    std::vector<double> multiply(std::span<const double> x) const;
    Matrix add(const Matrix& rhs) const;
    Matrix subtract(const Matrix& rhs) const;
    Matrix scale(double s) const;

    std::vector<double> column(std::size_t j) const;
    std::vector<double> row(std::size_t i) const;
    void set_column(std::size_t j, std::span<const double> v);

    /// Contiguous block copy, rows [r0, r0+nr) x cols [c0, c0+nc).
    Matrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const;
    /// First k columns.
    Matrix leading_columns(std::size_t k) const;

    bool same_shape(const Matrix& other) const {
        return rows_ == other.rows_ && cols_ == other.cols_;
    }

    /// Throws if any entry is NaN or Inf; called by the validating constructor.
    void check_finite() const;

  private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<double> data_;
};

Matrix operator*(const Matrix& a, const Matrix& b);
Matrix operator+(const Matrix& a, const Matrix& b);
Matrix operator-(const Matrix& a, const Matrix& b);

double dot(std::span<const double> a, std::span<const double> b);
double vector_norm2(std::span<const double> v);

} // namespace randla
