#include "randla/structured.hpp"

#include <cmath>
#include <numbers>

namespace randla::structured {

namespace {

bool is_pow2(std::size_t n) {
    return n != 0 && (n & (n - 1)) == 0;
}

std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n)
        p <<= 1;
    return p;
}

// Complex pointwise product in frequency domain followed by inverse FFT;
// both inputs already padded to the same power-of-two length.
std::vector<std::complex<double>> fft_convolve(std::span<const double> a, std::span<const double> b,
                                               std::size_t len) {
    std::vector<std::complex<double>> fa(len), fb(len);
    for (std::size_t i = 0; i < a.size(); ++i)
        fa[i] = a[i];
    for (std::size_t i = 0; i < b.size(); ++i)
        fb[i] = b[i];
    fa = fft(fa, FftDirection::Forward);
    fb = fft(fb, FftDirection::Forward);
    for (std::size_t i = 0; i < len; ++i)
        fa[i] *= fb[i];
    return fft(fa, FftDirection::Inverse);
}

// The fast path always produces a nominally real result; a large imaginary
// residue indicates numerical trouble and is rejected.
std::vector<double> take_real(const std::vector<std::complex<double>>& z, std::size_t n,
                              double scale) {
    double max_imag = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        max_imag = std::max(max_imag, std::abs(z[i].imag()));
    if (max_imag >= 1e-10 * std::max(scale, 1e-300))
        throw Error("structured product: imaginary residue exceeds tolerance");
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i)
        y[i] = z[i].real();
    return y;
}

} // namespace

StructuredSpec StructuredSpec::circulant(std::vector<double> first_col) {
    if (first_col.empty())
        throw InvalidArgument("circulant: empty first column");
    std::size_t n = first_col.size();
    return StructuredSpec{Kind::Circulant, n, n, std::move(first_col), {}};
}

StructuredSpec StructuredSpec::toeplitz(std::vector<double> first_col, std::vector<double> first_row) {
    if (first_col.empty() || first_row.empty())
        throw InvalidArgument("toeplitz: empty generators");
    if (first_col[0] != first_row[0])
        throw InvalidArgument("toeplitz: first_col[0] != first_row[0]");
    std::size_t m = first_col.size(), n = first_row.size();
    return StructuredSpec{Kind::Toeplitz, m, n, std::move(first_col), std::move(first_row)};
}

Matrix densify(const StructuredSpec& spec) {
    Matrix out(spec.n_rows, spec.n_cols);
    if (spec.kind == StructuredSpec::Kind::Circulant) {
        const std::size_t n = spec.n_rows;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                out(i, j) = spec.first_col[(i + n - j) % n];
    } else {
        for (std::size_t i = 0; i < spec.n_rows; ++i)
            for (std::size_t j = 0; j < spec.n_cols; ++j)
                out(i, j) = (i >= j) ? spec.first_col[i - j] : spec.first_row[j - i];
    }
    return out;
}

StructuredSpec transpose_spec(const StructuredSpec& spec) {
    if (spec.kind == StructuredSpec::Kind::Circulant) {
        const std::size_t n = spec.n_rows;
        std::vector<double> col(n);
        for (std::size_t k = 0; k < n; ++k)
            col[k] = spec.first_col[(n - k) % n];
        return StructuredSpec::circulant(std::move(col));
    }
    return StructuredSpec::toeplitz(spec.first_row, spec.first_col);
}

std::vector<std::complex<double>> fft(std::span<const std::complex<double>> x, FftDirection dir) {
    const std::size_t n = x.size();
    if (!is_pow2(n))
        throw LengthNotPowerOfTwo("fft: length must be a power of two");
    std::vector<std::complex<double>> a(x.begin(), x.end());
    // Bit-reversal permutation.
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1)
            j ^= bit;
        j ^= bit;
        if (i < j)
            std::swap(a[i], a[j]);
    }
    const double sign = (dir == FftDirection::Forward) ? -1.0 : 1.0;
    for (std::size_t len = 2; len <= n; len <<= 1) {
        double ang = sign * 2.0 * std::numbers::pi / static_cast<double>(len);
        std::complex<double> wlen(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                std::complex<double> u = a[i + k];
                std::complex<double> v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
    if (dir == FftDirection::Inverse) {
        for (auto& z : a)
            z /= static_cast<double>(n);
    }
    return a;
}

std::vector<double> circ_mul(const StructuredSpec& spec, std::span<const double> x) {
    if (spec.kind != StructuredSpec::Kind::Circulant)
        throw InvalidArgument("circ_mul: circulant spec required");
    const std::size_t n = spec.n_rows;
    if (x.size() != n)
        throw DimensionMismatch("circ_mul: vector length mismatch");
    double scale = vector_norm2(spec.first_col) * vector_norm2(x);
    if (is_pow2(n)) {
        auto conv = fft_convolve(spec.first_col, x, n);
        return take_real(conv, n, scale);
    }
    // General n: circular convolution through a padded linear convolution
    // folded back modulo n.
    std::size_t len = next_pow2(2 * n - 1);
    auto conv = fft_convolve(spec.first_col, x, len);
    std::vector<std::complex<double>> folded(n);
    for (std::size_t i = 0; i < n; ++i) {
        folded[i] = conv[i];
        if (i + n < 2 * n - 1)
            folded[i] += conv[i + n];
    }
    return take_real(folded, n, scale);
}

std::vector<double> toeplitz_mul(const StructuredSpec& spec, std::span<const double> x) {
    if (spec.kind != StructuredSpec::Kind::Toeplitz)
        throw InvalidArgument("toeplitz_mul: toeplitz spec required");
    const std::size_t m = spec.n_rows, n = spec.n_cols;
    if (x.size() != n)
        throw DimensionMismatch("toeplitz_mul: vector length mismatch");
    // Embed into a circulant of power-of-two order >= m+n-1. Its first
    // column carries the first column of T followed by the reversed strict
    // first row in the wrap-around positions.
    std::size_t len = next_pow2(m + n - 1);
    std::vector<double> col(len, 0.0);
    for (std::size_t i = 0; i < m; ++i)
        col[i] = spec.first_col[i];
    for (std::size_t j = 1; j < n; ++j)
        col[len - j] = spec.first_row[j];
    std::vector<double> xp(len, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        xp[i] = x[i];
    auto full = circ_mul(StructuredSpec::circulant(std::move(col)), xp);
    return std::vector<double>(full.begin(), full.begin() + static_cast<std::ptrdiff_t>(m));
}

Matrix multiply_matrix(const StructuredSpec& spec, const Matrix& a) {
    if (spec.n_cols != a.rows())
        throw DimensionMismatch("multiply_matrix: inner dimensions differ");
    Matrix out(spec.n_rows, a.cols());
    for (std::size_t j = 0; j < a.cols(); ++j) {
        auto col = a.column(j);
        auto y = (spec.kind == StructuredSpec::Kind::Circulant) ? circ_mul(spec, col)
                                                                : toeplitz_mul(spec, col);
        out.set_column(j, y);
    }
    return out;
}

} // namespace randla::structured
