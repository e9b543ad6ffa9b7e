#pragma once

#include <span>
#include <vector>

#include "randla/matrix.hpp"
#include "randla/random_gen.hpp"

namespace randla::genp {

/// LU from elimination with no row/column interchanges, with per-step pivot
/// magnitudes retained for growth telemetry. L*U reconstructs A only up to a
/// growth-dependent backward error; the telemetry is recorded, not asserted.
struct GenpFactorization {
    Matrix L; // unit lower triangular
    Matrix U; // upper triangular
    std::vector<double> pivot_abs;
    double pivot_min = 0.0;
    double pivot_max = 0.0;
};

/// Classical GENP. Throws PivotBreakdown when |pivot| < pivot_floor; callers
/// reproducing the failure arm of the experiments pass pivot_floor = 0 and
/// accept corrupted output.
GenpFactorization genp_factor(const Matrix& a, double pivot_floor = 1e-300);

/// Block Gaussian elimination with block pivot telemetry. The scalar L, U
/// agree with genp_factor (pivot blocks are factored by GENP internally);
/// per-step spectral norms of the pivot blocks and of their inverses are the
/// quantities bounded by the growth theorem.
struct BlockGeFactorization {
    Matrix L;
    Matrix U;
    std::vector<double> pivot_block_norms;
    std::vector<double> pivot_block_inv_norms;
};

BlockGeFactorization block_ge(const Matrix& a, std::size_t block);

/// Two triangular substitutions.
std::vector<double> genp_solve(const GenpFactorization& f, std::span<const double> b);

/// y_{k+1} = y_k + solve(b - A y_k), residuals accumulated at working
/// precision.
std::vector<double> iterative_refine(const Matrix& a, const GenpFactorization& f,
                                     std::span<const double> y0, std::span<const double> b,
                                     int steps);

enum class MulSide { Left, Right, Both };

struct PrecondReport {
    rnd::MultiplierKind multiplier;
    int refinement_steps = 0;
    double residual = 0.0;        // ||A y - b|| / ||b|| after preconditioned solve
    double raw_residual = 0.0;    // same for plain GENP on A (failure arm)
    double pivot_min = 0.0;       // preconditioned run
    double pivot_max = 0.0;
    double raw_pivot_min = 0.0;   // plain GENP run
    double raw_pivot_max = 0.0;
};

/// Draws random multiplier(s), solves the multiplied system by GENP, applies
/// the requested refinement steps, and reports both the preconditioned and
/// raw residuals. Structured multipliers are applied via the fast products.
/// On PivotBreakdown a fresh multiplier is drawn, at most 3 times.
std::pair<std::vector<double>, PrecondReport>
randomized_genp(const Matrix& a, std::span<const double> b, rnd::MultiplierKind kind, MulSide side,
                int refine, rnd::RngStream stream);

} // namespace randla::genp
