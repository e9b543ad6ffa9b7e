#pragma once

// Independent reference implementations used as oracles by the test suites.
// Everything here is deliberately naive and self-contained so that it cannot
// share a bug with the library code under test.

#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "randla/matrix.hpp"

namespace oracle {

using randla::Matrix;

inline Matrix naive_multiply(const Matrix& a, const Matrix& b) {
    Matrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < a.cols(); ++k)
                s += a(i, k) * b(k, j);
            c(i, j) = s;
        }
    return c;
}

inline double frobenius(const Matrix& a) {
    double s = 0.0;
    for (double v : a.data())
        s += v * v;
    return std::sqrt(s);
}

// Spectral norm by power iteration on A^T A, independent of any SVD code.
inline double power_norm2(const Matrix& a, int iters = 500) {
    std::vector<double> v(a.cols());
    for (std::size_t i = 0; i < v.size(); ++i)
        v[i] = 1.0 / std::sqrt(static_cast<double>(i + 1)); // fixed nonzero start
    double lambda = 0.0;
    for (int it = 0; it < iters; ++it) {
        std::vector<double> av = a.multiply(v);
        std::vector<double> w = a.transpose().multiply(av);
        double nw = 0.0;
        for (double x : w)
            nw += x * x;
        nw = std::sqrt(nw);
        if (nw == 0.0)
            return 0.0;
        for (std::size_t i = 0; i < w.size(); ++i)
            v[i] = w[i] / nw;
        lambda = nw;
    }
    return std::sqrt(lambda);
}

// Classical Gram-Schmidt QR with positive R diagonal (reference for
// qr_positive uniqueness).
struct GsQr {
    Matrix Q;
    Matrix R;
};

inline GsQr gram_schmidt_qr(const Matrix& a) {
    const std::size_t m = a.rows(), n = a.cols();
    Matrix q(m, n), r(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        std::vector<double> v = a.column(j);
        for (int pass = 0; pass < 2; ++pass) // reorthogonalize once
            for (std::size_t k = 0; k < j; ++k) {
                double p = 0.0;
                for (std::size_t i = 0; i < m; ++i)
                    p += q(i, k) * v[i];
                r(k, j) += p;
                for (std::size_t i = 0; i < m; ++i)
                    v[i] -= p * q(i, k);
            }
        double nv = 0.0;
        for (double x : v)
            nv += x * x;
        nv = std::sqrt(nv);
        r(j, j) = nv;
        for (std::size_t i = 0; i < m; ++i)
            q(i, j) = v[i] / nv;
    }
    return {std::move(q), std::move(r)};
}

// O(N^2) DFT oracle (forward: exp(-2 pi i k n / N)).
inline std::vector<std::complex<double>> naive_dft(const std::vector<std::complex<double>>& x,
                                                   bool inverse = false) {
    const std::size_t n = x.size();
    std::vector<std::complex<double>> y(n);
    const double sgn = inverse ? 1.0 : -1.0;
    for (std::size_t k = 0; k < n; ++k) {
        std::complex<double> s = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            double ang = sgn * 2.0 * M_PI * static_cast<double>(k * j) / static_cast<double>(n);
            s += x[j] * std::complex<double>(std::cos(ang), std::sin(ang));
        }
        y[k] = inverse ? s / static_cast<double>(n) : s;
    }
    return y;
}

// Normal-equations least squares / pseudo-inverse for full-column-rank thin
// matrices: (A^T A)^{-1} A^T via Gaussian elimination with partial pivoting.
inline Matrix normal_equations_pinv(const Matrix& a) {
    const std::size_t n = a.cols();
    Matrix ata = naive_multiply(a.transpose(), a);
    // Invert by row reduction of [ata | I].
    std::vector<std::vector<double>> w(n, std::vector<double>(2 * n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j)
            w[i][j] = ata(i, j);
        w[i][n + i] = 1.0;
    }
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(w[i][k]) > std::abs(w[p][k]))
                p = i;
        std::swap(w[k], w[p]);
        double piv = w[k][k];
        for (std::size_t j = 0; j < 2 * n; ++j)
            w[k][j] /= piv;
        for (std::size_t i = 0; i < n; ++i) {
            if (i == k)
                continue;
            double f = w[i][k];
            for (std::size_t j = 0; j < 2 * n; ++j)
                w[i][j] -= f * w[k][j];
        }
    }
    Matrix inv(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            inv(i, j) = w[i][n + j];
    return naive_multiply(inv, a.transpose());
}

inline double rel_diff(const Matrix& a, const Matrix& b) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < a.data().size(); ++i) {
        double d = a.data()[i] - b.data()[i];
        num += d * d;
        den += b.data()[i] * b.data()[i];
    }
    return den == 0.0 ? std::sqrt(num) : std::sqrt(num / den);
}

} // namespace oracle
