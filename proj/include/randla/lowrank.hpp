#pragma once

#include <span>
#include <vector>

#include "randla/dense_core.hpp"
#include "randla/matrix.hpp"
#include "randla/random_gen.hpp"

namespace randla::lowrank {

/// Projection of A onto the column span of a full-column-rank basis:
/// right side A T (T^T T)^{-1} T^T, left side S (S^T S)^{-1} S^T A.
/// With `orthonormal` the Gram inverse is skipped (T T^T form).
Matrix project_onto_basis(const Matrix& a, const Matrix& basis, bool orthonormal,
                          dense::Side side = dense::Side::Right);

enum class SpaceSide { LeftSpace, RightSpace };

/// Sketch of a leading singular space: A^T G (right space, G m x rho_plus)
/// or A H (left space, H n x rho_plus). Structured multiplier kinds go
/// through the fast products.
Matrix approx_basis(const Matrix& a, std::size_t rho_plus, rnd::MultiplierKind kind,
                    SpaceSide side, rnd::RngStream stream);

struct LowRankResult {
    std::size_t rho = 0;
    Matrix basis = Matrix(1, 1);  // n x rho, orthonormal columns
    Matrix approx = Matrix(1, 1); // m x n, rank <= rho
    double residual = 0;          // ||approx - A|| / ||A|| (spectral)
    bool ok = false;
};

/// Randomized rank-rho approximation: sketch, rank-revealing truncation of
/// the thin sketch (SVD; minimal s with sigma_{s+1} <= tau * ||A||), then an
/// orthonormal-basis projection checked against tau_prime. tau <= 0 selects
/// the tolerance automatically from the largest relative gap of the sketch
/// spectrum below 1e-3. Failure is reported in `ok`, after up to 3 redraws.
LowRankResult proto_lowrank(const Matrix& a, std::size_t rho_plus, double tau, double tau_prime,
                            rnd::MultiplierKind kind, rnd::RngStream stream);

/// (A A^T)^h A; raises every singular value to the power 2h+1.
Matrix power_transform(const Matrix& a, unsigned h);

/// Sampled projection test: ||K^T (A - Ahat) L|| <= tau ||K|| ||A|| ||L||
/// for small Gaussian K (m x rho1) and L (n x rho2).
bool sampled_residual_check(const Matrix& a, const Matrix& ahat, std::size_t rho1,
                            std::size_t rho2, double tau, rnd::RngStream stream);

enum class SvMethod { Power, Lanczos };

struct SvEstimates {
    double sv_max = 0.0;
    double sv_min = 0.0;
};

/// Extremal singular values from matrix-vector products only: Power method
/// on A^T A (then on the shifted complement for the smallest), or Lanczos
/// with full reorthogonalization. Throws NoConvergence when the estimates
/// are still moving by more than 1e-4 relative after `iters` iterations.
SvEstimates extremal_sv_estimate(const Matrix& a, SvMethod method, int iters,
                                 rnd::RngStream stream);

/// COND probe: full numerical rank and sv_max/sv_min below the threshold.
bool cond_probe(const Matrix& b, double kappa_threshold, SvMethod method, int iters,
                rnd::RngStream stream);

enum class SearchPolicy { Binary, LinearDown };

struct NrankResult {
    std::size_t rho = 0;
    // n x rho sketch at the final rank, approx basis of the leading right space
    Matrix basis = Matrix(1, 1);
};

/// Numerical rank by probing sketches A^T G_rho with a COND subroutine;
/// G is drawn once at rho_plus columns and only truncated during the search.
/// No pivoting or orthogonalization touches A itself.
NrankResult nrank_search(const Matrix& a, std::size_t rho_minus, std::size_t rho_plus,
                         double kappa_threshold, SearchPolicy policy, rnd::RngStream stream);

/// Gaussian compression F_rho G_rho (rho x rho) used to probe conditioning
/// at reduced size.
Matrix nrank_probe_compress(const Matrix& g_rho, rnd::RngStream stream);

} // namespace randla::lowrank
