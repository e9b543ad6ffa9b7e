#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "randla/matrix.hpp"
#include "randla/random_gen.hpp"

namespace randla::bench {

/// {min, max, mean, std} over a batch of trial scalars; population std.
/// Raw samples are retained so the derived fields stay recomputable.
struct TrialStats {
    std::size_t n_trials = 0;
    double min = 0.0;
    double max = 0.0;
    double mean = 0.0;
    double std_dev = 0.0;
    std::vector<double> samples;
};

TrialStats make_stats(std::vector<double> samples);

/// Result of a Monte Carlo tail-bound check on a grid: the empirical
/// exceedance (or CDF) frequency against the stated theoretical bound,
/// passing when empirical <= bound + 3 * binomial std at every grid point
/// (>= for lower-bound-type claims).
struct TailCheckReport {
    std::string bound_name;
    std::vector<double> grid;
    std::vector<double> empirical_freq;
    std::vector<double> theoretical_bound;
    std::size_t n_trials = 0;
    bool lower_bound = false; // true: pass needs empirical >= bound - margin
    bool pass = false;

    static double binomial_std(double p, std::size_t n);
    void evaluate(); // fills `pass` from the 3-sigma rule
};

/// One row of the GENP benchmark table (per size and refinement count).
struct GenpRow {
    std::size_t n = 0;
    int refine = 0;
    TrialStats stats;     // preconditioned relative residuals
    TrialStats raw_stats; // plain no-pivot GENP residuals (contrast arm)
};

/// Randomized GENP on ill-leading-block systems: `trials` systems per size,
/// each solved with refine = 0 and refine = 1.
std::vector<GenpRow> table1_genp(const std::vector<std::size_t>& sizes, std::size_t trials,
                                 rnd::MultiplierKind kind, std::uint64_t seed,
                                 unsigned threads = 1);

/// One row of the low-rank benchmark (per (q, n) and residual flavor).
struct LowRankRow {
    std::size_t q = 0;
    std::size_t n = 0;
    int flavor = 1; // 1: head least-squares residual, 2: projection residual
    TrialStats stats;
};

enum class LowRankMultiplier { Gaussian, ToeplitzGaussian };

/// Low-rank benchmark: profile matrices with numerical rank q, sketch
/// B = A^T G, residuals rn1 = ||B Y - T_q|| (least squares against the
/// leading right singular vectors) and rn2 = ||A - A Q Q^T||, Q = Q(B).
std::vector<LowRankRow> table23_lowrank(const std::vector<std::size_t>& ns,
                                        const std::vector<std::size_t>& qs, std::size_t trials,
                                        LowRankMultiplier kind, std::uint64_t seed,
                                        unsigned threads = 1);

/// Smallest-singular-value tail of a Gaussian matrix (optionally shifted by
/// a fixed B): frequency of ||(A - B)^+|| >= 2.35 x sqrt(l) / sigma vs 1/x.
TailCheckReport tail_check_theorem31(std::size_t m, std::size_t n, double sigma,
                                     const std::vector<double>& x_grid, std::size_t trials,
                                     std::uint64_t seed, const Matrix* shift = nullptr,
                                     unsigned threads = 1);

struct Theorem41Report {
    TailCheckReport left;             // P = G M
    TailCheckReport right;            // P = M H
    std::vector<TailCheckReport> leading_blocks; // leading j x j blocks of G M
    double full_rank_freq = 0.0;      // G M full rank across trials
    bool pass = false;
};

/// Products with a fixed matrix M: tails of ||(GM)^+|| and ||(MH)^+||
/// against 2.35 x sqrt(r_hat) ||M^+|| / sigma, plus the leading-block
/// variant for each j <= r and the full-rank frequency of G M.
Theorem41Report tail_check_theorem41(const Matrix& m_fixed, std::size_t r,
                                     const std::vector<double>& x_grid, std::size_t trials,
                                     std::uint64_t seed, double sigma = 1.0,
                                     unsigned threads = 1);

struct NormCondReport {
    TailCheckReport norm_check; // F_{||A||}(z) lower bound
    TailCheckReport cond_check; // F_{kappa(A)}(y) lower bound
    bool pass = false;
};

/// Norm and condition-number likelihood checks for square Gaussian matrices.
/// Grid points where the stated lower bound is below 0.05 are skipped.
NormCondReport norm_cond_checks(std::size_t n, double sigma, std::size_t trials,
                                std::uint64_t seed, unsigned threads = 1);

/// Exact-arithmetic singularity frequencies of random integer matrices with
/// entries uniform in {1, ..., cardinality}: both plain singularity vs
/// k/|Delta| and strong nonsingularity (all leading minors) vs
/// (k+1)k/(2|Delta|); general and Toeplitz samples.
std::vector<TailCheckReport> appendixA_check(const std::vector<std::size_t>& k_list,
                                             const std::vector<std::size_t>& cardinalities,
                                             std::size_t trials, std::uint64_t seed,
                                             unsigned threads = 1);

/// Deterministic parallel map: each trial writes its own slot, so the result
/// is identical to the serial loop for any thread count. f(trial_index) must
/// be independent across trials.
std::vector<std::vector<double>>
parallel_trials(std::size_t trials, unsigned threads,
                const std::function<std::vector<double>(std::size_t)>& f);

/// CSV/JSON emission.
std::string genp_rows_csv(const std::vector<GenpRow>& rows);
std::string genp_rows_json(const std::vector<GenpRow>& rows);
std::string lowrank_rows_csv(const std::vector<LowRankRow>& rows);
std::string lowrank_rows_json(const std::vector<LowRankRow>& rows);
std::string reports_csv(const std::vector<TailCheckReport>& reports);
std::string reports_json(const std::vector<TailCheckReport>& reports);

/// Thread-count resolution: explicit flag > RANDLA_THREADS env > 1.
unsigned resolve_threads(int flag_value);

} // namespace randla::bench
