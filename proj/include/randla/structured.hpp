#pragma once

#include <complex>
#include <span>
#include <vector>

#include "randla/matrix.hpp"

namespace randla::structured {

/// Compact description of a circulant (first column) or Toeplitz
/// (first column + first row) matrix.
struct StructuredSpec {
    enum class Kind { Circulant, Toeplitz };

    Kind kind;
    std::size_t n_rows;
    std::size_t n_cols;
    std::vector<double> first_col;
    std::vector<double> first_row; // Toeplitz only; first_row[0] == first_col[0]

    static StructuredSpec circulant(std::vector<double> first_col);
    static StructuredSpec toeplitz(std::vector<double> first_col, std::vector<double> first_row);
};

/// O(n^2) densification, the naive oracle for the fast products.
Matrix densify(const StructuredSpec& spec);

/// Transposed structured matrix, still in compact form.
StructuredSpec transpose_spec(const StructuredSpec& spec);

enum class FftDirection { Forward, Inverse };

/// Radix-2 DFT; length must be a power of two (callers pad). The inverse
/// carries the 1/N normalization.
std::vector<std::complex<double>> fft(std::span<const std::complex<double>> x, FftDirection dir);

/// C*x for a circulant spec via FFT-diagonalization, O(n log n).
std::vector<double> circ_mul(const StructuredSpec& spec, std::span<const double> x);

/// T*x for an m x n Toeplitz spec via circulant embedding of power-of-two
/// size >= m+n-1, O((m+n) log(m+n)).
std::vector<double> toeplitz_mul(const StructuredSpec& spec, std::span<const double> x);

/// spec * A, applying the fast product column by column.
Matrix multiply_matrix(const StructuredSpec& spec, const Matrix& a);

} // namespace randla::structured
