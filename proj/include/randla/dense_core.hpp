#pragma once

#include <cstddef>
#include <vector>

#include "randla/matrix.hpp"

namespace randla::dense {

enum class NormKind { One, Two, Inf, Frobenius };

/// Matrix norm. One/Inf are max column/row absolute sums, Frobenius the
/// root-sum-of-squares, Two the largest singular value.
double norm(const Matrix& a, NormKind kind);

inline double norm2(const Matrix& a) { return norm(a, NormKind::Two); }

/// QR with orthonormal-column Q (m x n) and upper-triangular R (n x n) whose
/// diagonal is strictly positive, which makes the factorization unique.
struct QrFactors {
    Matrix Q;
    Matrix R;
};

/// Requires rows >= cols and full numerical column rank; throws RankDeficient
/// otherwise so callers can reduce their candidate rank.
QrFactors qr_positive(const Matrix& a);

/// Full SVD A = S * diag(sigma) * T^T with square orthogonal S (m x m) and
/// T (n x n), sigma non-increasing. Column signs are fixed so the
/// largest-magnitude entry of each left singular vector is positive.
struct SvdFactors {
    Matrix S;
    std::vector<double> sigma;
    Matrix T;
};

SvdFactors svd(const Matrix& a);

/// Moore-Penrose pseudo-inverse; singular values below tol*sigma[0] are
/// treated as zero.
Matrix pseudo_inverse(const Matrix& a, double tol);

/// sigma[0] / sigma[rank-1] with rank = numerical_rank(a, tol). With tol = 0
/// the full rank is used and a singular matrix yields +inf.
double cond2(const Matrix& a, double tol);

/// Largest j with sigma[j-1] >= tol * sigma[0]; 0 for the zero matrix.
std::size_t numerical_rank(const Matrix& a, double tol);
std::size_t numerical_rank(const SvdFactors& f, double tol);

/// Nearest matrix of rank <= rho (spectral and Frobenius).
Matrix truncate_svd(const SvdFactors& f, std::size_t rho);

enum class Side { Left, Right };

/// First rho columns of S (left) or T (right). `unique` is false when
/// sigma[rho-1] == sigma[rho] within 1e-12 relative, in which case the
/// spanned space is not uniquely determined.
struct BasisResult {
    Matrix basis;
    bool unique;
};

BasisResult leading_basis(const SvdFactors& f, std::size_t rho, Side side);

/// Solve A x = b through a pivoted dense factorization. Test/benchmark
/// reference path, deliberately independent of the GENP module.
std::vector<double> pivoted_solve(const Matrix& a, std::span<const double> b);

/// Least-squares solve min ||A X - B||_F (thin A, full column rank not
/// required; rank handled through the SVD).
Matrix least_squares(const Matrix& a, const Matrix& b);

/// Inverse of a small well conditioned square matrix (pivoted).
Matrix inverse(const Matrix& a);

} // namespace randla::dense
