// End-to-end acceptance checks: one PASS/FAIL line per criterion, nonzero
// exit when any criterion fails. Every expected value is either a published
// table entry (banded by a factor of 100) or a property checked against an
// independent computation.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <thread>
#include <vector>

#include "randla/bench.hpp"
#include "randla/dense_core.hpp"
#include "randla/genp.hpp"
#include "randla/lowrank.hpp"
#include "randla/random_gen.hpp"
#include "randla/structured.hpp"
#include "randla/tt.hpp"

using namespace randla;

namespace {

int g_failures = 0;

void report(int criterion, bool pass, const std::string& detail) {
    std::printf("%s criterion %d: %s\n", pass ? "PASS" : "FAIL", criterion, detail.c_str());
    if (!pass)
        ++g_failures;
}

unsigned pick_threads() {
    unsigned hw = std::thread::hardware_concurrency();
    return std::clamp(hw, 1u, 8u);
}

std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2e", v);
    return buf;
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    return v[v.size() / 2];
}

// --- criterion 1: GENP with randomized preconditioning, Table 1 scale ---
void criterion1(unsigned threads) {
    auto t0 = std::chrono::steady_clock::now();
    auto rows = bench::table1_genp({64, 256}, 100,
                                   {rnd::MultiplierTag::CirculantSign, 0.0, 1.0}, 20260825,
                                   threads);
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool pass = secs <= 300.0;
    std::string detail;
    for (const auto& r : rows) {
        if (r.refine == 0) {
            pass = pass && r.stats.mean <= 1e-8 && r.stats.max <= 1e-6 &&
                   median(r.raw_stats.samples) >= 10.0;
            detail += "n=" + std::to_string(r.n) + " mean0=" + sci(r.stats.mean) +
                      " worst0=" + sci(r.stats.max) +
                      " raw_med=" + sci(median(r.raw_stats.samples)) + " ";
        } else {
            pass = pass && r.stats.mean <= 1e-10;
            detail += "mean1=" + sci(r.stats.mean) + " ";
        }
    }
    detail += "runtime=" + sci(secs) + "s";
    report(1, pass, detail);
}

// --- criteria 2 and 3: low-rank residual tables within a factor 100 ---
struct TablePoint {
    std::size_t q;
    std::size_t n;
    double mean1; // published mean of the least-squares residual
    double mean2; // published mean of the projection residual
};

void table_criterion(int criterion, bench::LowRankMultiplier kind,
                     const std::vector<TablePoint>& points, unsigned threads) {
    bool pass = true;
    std::string detail;
    for (const auto& p : points) {
        auto rows = bench::table23_lowrank({p.n}, {p.q}, 100, kind, 20260825, threads);
        double m1 = rows[0].stats.mean, m2 = rows[1].stats.mean;
        pass = pass && m1 <= 100.0 * p.mean1 && m2 <= 100.0 * p.mean2;
        detail += "(q=" + std::to_string(p.q) + ",n=" + std::to_string(p.n) + ") rn1=" + sci(m1) +
                  "<=" + sci(100.0 * p.mean1) + " rn2=" + sci(m2) + "<=" + sci(100.0 * p.mean2) +
                  " ";
    }
    report(criterion, pass, detail);
}

// --- criterion 4: projection onto an exact singular basis is optimal ---
void criterion4() {
    bool pass = true;
    double worst = 0.0;
    for (std::uint64_t id = 0; id < 20; ++id) {
        std::size_t n = 16 + 8 * (id % 7); // n <= 64
        std::size_t rho = 2 + id % 6;
        auto sig = rnd::paper_sigma_profile(n, rho);
        auto pf = rnd::profile_matrix_factors(n, sig, rnd::RngStream{101, id});
        double opt = sig[rho]; // sigma_{rho+1}
        Matrix t_head = pf.T.leading_columns(rho);
        Matrix s_head = pf.S.leading_columns(rho);
        Matrix w = rnd::gaussian_matrix(rho, rho, 0.0, 1.0, rnd::RngStream{101, 100 + id});
        const Matrix bases_r[2] = {t_head, t_head.multiply(w)};
        const Matrix bases_l[2] = {s_head, s_head.multiply(w)};
        for (int k = 0; k < 2; ++k) {
            bool ortho = (k == 0);
            double er = dense::norm2(pf.A.subtract(
                lowrank::project_onto_basis(pf.A, bases_r[k], ortho, dense::Side::Right)));
            double el = dense::norm2(pf.A.subtract(
                lowrank::project_onto_basis(pf.A, bases_l[k], ortho, dense::Side::Left)));
            worst = std::max({worst, std::abs(er - opt), std::abs(el - opt)});
        }
    }
    pass = worst <= 1e-10;
    report(4, pass, "max |error - sigma_{rho+1}| = " + sci(worst));
}

// --- criterion 5: numerical-rank search without pivoting ---
void criterion5() {
    bool pass = true;
    std::string detail;
    for (std::size_t rho : {1ul, 8ul, 32ul})
        for (auto policy : {lowrank::SearchPolicy::Binary, lowrank::SearchPolicy::LinearDown}) {
            int hits = 0;
            auto sig = rnd::paper_sigma_profile(64, rho);
            for (std::uint64_t id = 0; id < 100; ++id) {
                Matrix a = rnd::profile_matrix(64, sig, rnd::RngStream{102, rho * 1000 + id});
                auto res = lowrank::nrank_search(a, 0, std::min<std::size_t>(2 * rho + 8, 63),
                                                 1e6, policy,
                                                 rnd::RngStream{103, rho * 1000 + id});
                if (res.rho == rho)
                    ++hits;
            }
            pass = pass && hits >= 95;
            detail += "rho=" + std::to_string(rho) +
                      (policy == lowrank::SearchPolicy::Binary ? "b" : "l") + ":" +
                      std::to_string(hits) + "/100 ";
        }
    report(5, pass, detail);
}

// --- criterion 6: tensor-train round trips and the error bound ---
void criterion6() {
    bool pass = true;
    double worst_svd = 0.0, worst_rand = 0.0;
    for (std::uint64_t id = 0; id < 20; ++id) {
        std::size_t r1 = 1 + id % 3, r2 = 1 + (id / 3) % 3, r3 = 1 + (id / 9) % 3;
        auto src = tt::random_train({4, 4, 4, 4}, {r1, r2, r3}, rnd::RngStream{104, id});
        tt::DenseTensor t = tt::tt_reconstruct(src);
        double nf = t.frobenius_norm();
        auto det = tt::tt_svd(t, std::vector<std::size_t>{r1, r2, r3});
        double e_svd = tt::tt_error(t, det.train) / nf;
        double rhs = 0.0;
        for (double tail : det.sweep_tails)
            rhs += tail * tail;
        double err_abs = tt::tt_error(t, det.train);
        pass = pass && err_abs * err_abs <= rhs + 1e-20 * nf * nf;
        auto rnd_train = tt::tt_randomized(t, {r1, r2, r3}, 0, rnd::RngStream{105, id});
        double e_rand = tt::tt_error(t, rnd_train) / nf;
        worst_svd = std::max(worst_svd, e_svd);
        worst_rand = std::max(worst_rand, e_rand);
    }
    pass = pass && worst_svd <= 1e-10 && worst_rand <= 1e-8;
    report(6, pass,
           "worst tt_svd=" + sci(worst_svd) + " worst tt_randomized=" + sci(worst_rand));
}

// --- criterion 7: Monte Carlo tail bounds for pseudo-inverse norms ---
void criterion7(unsigned threads) {
    const std::vector<double> grid{2.0, 5.0, 10.0};
    auto t31 = bench::tail_check_theorem31(16, 16, 1.0, grid, 2000, 20260825, nullptr, threads);
    auto sig = rnd::paper_sigma_profile(16, 8);
    Matrix m = rnd::profile_matrix(16, sig, rnd::RngStream{106, 0});
    auto t41 = bench::tail_check_theorem41(m, 8, grid, 2000, 20260825, 1.0, threads);
    bool pass = t31.pass && t41.pass && t41.full_rank_freq == 1.0;
    report(7, pass,
           std::string("thm3.1 ") + (t31.pass ? "ok" : "violated") + ", thm4.1/cor4.2 " +
               (t41.pass ? "ok" : "violated") +
               ", full-rank freq=" + sci(t41.full_rank_freq));
}

// --- criterion 8: exact-arithmetic singularity frequencies ---
void criterion8(unsigned threads) {
    auto reports = bench::appendixA_check({2, 3, 4}, {16, 64}, 5000, 20260825, threads);
    bool pass = true;
    int failed = 0;
    for (const auto& r : reports)
        if (!r.pass) {
            pass = false;
            ++failed;
        }
    report(8, pass,
           std::to_string(reports.size()) + " frequency checks, " + std::to_string(failed) +
               " outside the 3-sigma band");
}

// --- criterion 9: fast structured products against densified oracles ---
void criterion9() {
    double worst = 0.0;
    for (std::uint64_t id = 0; id < 50; ++id) {
        rnd::Rng shape(rnd::RngStream{107, id});
        bool circ = (id % 2 == 0);
        std::size_t mrows = static_cast<std::size_t>(shape.uniform_int(1, 128));
        std::size_t ncols = circ ? mrows : static_cast<std::size_t>(shape.uniform_int(1, 128));
        auto spec = rnd::random_structured(
            {circ ? rnd::MultiplierTag::CirculantGaussian : rnd::MultiplierTag::ToeplitzGaussian,
             0.0, 1.0},
            mrows, ncols, rnd::RngStream{107, 100 + id});
        Matrix dense_m = structured::densify(spec);
        rnd::Rng r(rnd::RngStream{107, 200 + id});
        std::vector<double> x(ncols);
        for (double& v : x)
            v = r.uniform_pm1();
        auto fast = circ ? structured::circ_mul(spec, x) : structured::toeplitz_mul(spec, x);
        std::vector<double> naive(mrows, 0.0);
        for (std::size_t i = 0; i < mrows; ++i)
            for (std::size_t j = 0; j < ncols; ++j)
                naive[i] += dense_m(i, j) * x[j];
        double num = 0.0, den = 0.0;
        for (std::size_t i = 0; i < mrows; ++i) {
            num += (fast[i] - naive[i]) * (fast[i] - naive[i]);
            den += naive[i] * naive[i];
        }
        worst = std::max(worst, std::sqrt(num / (den + 1e-300)));
    }
    report(9, worst <= 1e-10, "worst relative product error = " + sci(worst));
}

// --- criterion 10: block-elimination growth telemetry ---
void criterion10() {
    bool pass = true;
    double slack = 1e-8;
    for (std::uint64_t id = 0; id < 20; ++id) {
        // Strongly well conditioned: diagonally dominant, so every leading
        // block (and its inverse) has modest norm.
        std::size_t n = 16;
        Matrix a = rnd::uniform_matrix(n, n, rnd::RngStream{108, id});
        for (std::size_t i = 0; i < n; ++i)
            a(i, i) = static_cast<double>(n) + 1.0;
        double bigN = dense::norm2(a);
        double nminus = 0.0;
        for (std::size_t j = 1; j <= n; ++j)
            nminus = std::max(nminus, dense::norm2(dense::inverse(a.block(0, 0, j, j))));
        for (std::size_t block : {1ul, 4ul, 8ul}) {
            auto f = genp::block_ge(a, block);
            for (double v : f.pivot_block_norms)
                pass = pass && v <= bigN + nminus * bigN * bigN + slack;
            for (double v : f.pivot_block_inv_norms)
                pass = pass && v <= nminus + slack;
        }
    }
    report(10, pass, "pivot-block norm and inverse-norm bounds on 20 seeded matrices");
}

} // namespace

int main() {
    const unsigned threads = pick_threads();
    std::printf("acceptance run, %u threads\n", threads);
    criterion1(threads);
    table_criterion(2, bench::LowRankMultiplier::Gaussian,
                    {{1, 64, 3.58e-9, 3.86e-9},
                     {8, 64, 4.30e-8, 5.77e-9}, // rn1 mean taken from the nearest published row
                     {8, 256, 3.40e-8, 1.59e-8},
                     {32, 64, 1.01e-7, 2.30e-8}},
                    threads);
    table_criterion(3, bench::LowRankMultiplier::ToeplitzGaussian,
                    {{8, 64, 1.43e-7, 6.37e-8}, {32, 256, 1.18e-7, 2.74e-8}}, threads);
    criterion4();
    criterion5();
    criterion6();
    criterion7(threads);
    criterion8(threads);
    criterion9();
    criterion10();
    std::printf("%s\n", g_failures == 0 ? "ALL CRITERIA PASSED" : "CRITERIA FAILED");
    return g_failures == 0 ? 0 : 1;
}
