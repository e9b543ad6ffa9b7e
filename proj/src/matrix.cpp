#include "randla/matrix.hpp"

#include <cmath>
#include <utility>

namespace randla {

Matrix::Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {
    if (rows == 0 || cols == 0)
        throw InvalidArgument("Matrix: dimensions must be positive");
}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
    if (rows == 0 || cols == 0)
        throw InvalidArgument("Matrix: dimensions must be positive");
    if (data_.size() != rows * cols)
        throw DimensionMismatch("Matrix: entry count does not match rows*cols");
    check_finite();
}

void Matrix::check_finite() const {
    for (double v : data_)
        if (!std::isfinite(v))
            throw InvalidArgument("Matrix: non-finite entry");
}

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        m(i, i) = 1.0;
    return m;
}

Matrix Matrix::diagonal(std::span<const double> d) {
    return diagonal(d.size(), d.size(), d);
}

Matrix Matrix::diagonal(std::size_t rows, std::size_t cols, std::span<const double> d) {
    Matrix m(rows, cols);
    std::size_t l = std::min(rows, cols);
    for (std::size_t i = 0; i < l && i < d.size(); ++i)
        m(i, i) = d[i];
    return m;
}

Matrix Matrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
    std::size_t nr = rows.size();
    std::size_t nc = nr ? rows.begin()->size() : 0;
    Matrix m(nr, nc);
    std::size_t i = 0;
    for (const auto& r : rows) {
        if (r.size() != nc)
            throw DimensionMismatch("from_rows: ragged rows");
        std::size_t j = 0;
        for (double v : r)
            m(i, j++) = v;
        ++i;
    }
    m.check_finite();
    return m;
}

Matrix Matrix::from_columns(const std::vector<std::vector<double>>& cols) {
    std::size_t nc = cols.size();
    std::size_t nr = nc ? cols.front().size() : 0;
    Matrix m(nr, nc);
    for (std::size_t j = 0; j < nc; ++j) {
        if (cols[j].size() != nr)
            throw DimensionMismatch("from_columns: ragged columns");
        for (std::size_t i = 0; i < nr; ++i)
            m(i, j) = cols[j][i];
    }
    m.check_finite();
    return m;
}

Matrix Matrix::transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j)
            t(j, i) = (*this)(i, j);
    return t;
}

Matrix Matrix::multiply(const Matrix& rhs) const {
    if (cols_ != rhs.rows_)
        throw DimensionMismatch("multiply: inner dimensions differ");
    Matrix out(rows_, rhs.cols_);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t k = 0; k < cols_; ++k) {
            double a = (*this)(i, k);
            if (a == 0.0)
                continue;
            const double* rrow = &rhs.data_[k * rhs.cols_];
            double* orow = &out.data_[i * out.cols_];
            for (std::size_t j = 0; j < rhs.cols_; ++j)
                orow[j] += a * rrow[j];
        }
    }
    return out;
}

std::vector<double> Matrix::multiply(std::span<const double> x) const {
    if (x.size() != cols_)
        throw DimensionMismatch("multiply: vector length mismatch");
    std::vector<double> y(rows_, 0.0);
    for (std::size_t i = 0; i < rows_; ++i) {
        double s = 0.0;
        const double* r = &data_[i * cols_];
        for (std::size_t j = 0; j < cols_; ++j)
            s += r[j] * x[j];
        y[i] = s;
    }
    return y;
}

Matrix Matrix::add(const Matrix& rhs) const {
    if (!same_shape(rhs))
        throw DimensionMismatch("add: shape mismatch");
    Matrix out = *this;
    for (std::size_t i = 0; i < data_.size(); ++i)
        out.data_[i] += rhs.data_[i];
    return out;
}

Matrix Matrix::subtract(const Matrix& rhs) const {
    if (!same_shape(rhs))
        throw DimensionMismatch("subtract: shape mismatch");
    Matrix out = *this;
    for (std::size_t i = 0; i < data_.size(); ++i)
        out.data_[i] -= rhs.data_[i];
    return out;
}

Matrix Matrix::scale(double s) const {
    Matrix out = *this;
    for (double& v : out.data_)
        v *= s;
    return out;
}

std::vector<double> Matrix::column(std::size_t j) const {
    if (j >= cols_)
        throw IndexOutOfRange("column: index out of range");
    std::vector<double> c(rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        c[i] = (*this)(i, j);
    return c;
}

std::vector<double> Matrix::row(std::size_t i) const {
    if (i >= rows_)
        throw IndexOutOfRange("row: index out of range");
    return std::vector<double>(data_.begin() + i * cols_, data_.begin() + (i + 1) * cols_);
}

void Matrix::set_column(std::size_t j, std::span<const double> v) {
    if (j >= cols_ || v.size() != rows_)
        throw DimensionMismatch("set_column: shape mismatch");
    for (std::size_t i = 0; i < rows_; ++i)
        (*this)(i, j) = v[i];
}

Matrix Matrix::block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
    if (r0 + nr > rows_ || c0 + nc > cols_)
        throw IndexOutOfRange("block: out of range");
    Matrix out(nr, nc);
    for (std::size_t i = 0; i < nr; ++i)
        for (std::size_t j = 0; j < nc; ++j)
            out(i, j) = (*this)(r0 + i, c0 + j);
    return out;
}

Matrix Matrix::leading_columns(std::size_t k) const {
    return block(0, 0, rows_, k);
}

Matrix operator*(const Matrix& a, const Matrix& b) {
    return a.multiply(b);
}
Matrix operator+(const Matrix& a, const Matrix& b) {
    return a.add(b);
}
Matrix operator-(const Matrix& a, const Matrix& b) {
    return a.subtract(b);
}

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        s += a[i] * b[i];
    return s;
}

double vector_norm2(std::span<const double> v) {
    double s = 0.0;
    for (double x : v)
        s += x * x;
    return std::sqrt(s);
}

} // namespace randla
