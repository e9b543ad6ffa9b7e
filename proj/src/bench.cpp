#include "randla/bench.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <mutex>
#include <thread>

#include <json.hpp>

#include "randla/dense_core.hpp"
#include "randla/errors.hpp"
#include "randla/genp.hpp"
#include "randla/structured.hpp"

namespace randla::bench {

using nlohmann::json;

TrialStats make_stats(std::vector<double> samples) {
    if (samples.empty())
        throw InvalidArgument("make_stats: empty sample set");
    TrialStats s;
    s.n_trials = samples.size();
    s.min = samples[0];
    s.max = samples[0];
    double sum = 0.0;
    for (double v : samples) {
        s.min = std::min(s.min, v);
        s.max = std::max(s.max, v);
        sum += v;
    }
    s.mean = sum / static_cast<double>(samples.size());
    double ss = 0.0;
    for (double v : samples) {
        double d = v - s.mean;
        ss += d * d;
    }
    s.std_dev = std::sqrt(ss / static_cast<double>(samples.size()));
    s.samples = std::move(samples);
    return s;
}

double TailCheckReport::binomial_std(double p, std::size_t n) {
    p = std::clamp(p, 0.0, 1.0);
    return std::sqrt(p * (1.0 - p) / static_cast<double>(n));
}

void TailCheckReport::evaluate() {
    if (grid.size() != empirical_freq.size() || grid.size() != theoretical_bound.size())
        throw InvalidArgument("TailCheckReport: grid/list length mismatch");
    pass = true;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        double margin = 3.0 * binomial_std(empirical_freq[i], n_trials);
        bool ok = lower_bound ? empirical_freq[i] >= theoretical_bound[i] - margin
                              : empirical_freq[i] <= theoretical_bound[i] + margin;
        pass = pass && ok;
    }
}

std::vector<std::vector<double>>
parallel_trials(std::size_t trials, unsigned threads,
                const std::function<std::vector<double>(std::size_t)>& f) {
    std::vector<std::vector<double>> out(trials);
    threads = std::max(1u, threads);
    if (threads == 1 || trials < 2) {
        for (std::size_t t = 0; t < trials; ++t)
            out[t] = f(t);
        return out;
    }
    const unsigned nthreads = std::min<std::size_t>(threads, trials);
    std::vector<std::thread> pool;
    std::exception_ptr error;
    std::mutex error_mutex;
    for (unsigned id = 0; id < nthreads; ++id)
        pool.emplace_back([&, id] {
            try {
                for (std::size_t t = id; t < trials; t += nthreads)
                    out[t] = f(t);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error)
                    error = std::current_exception();
            }
        });
    for (auto& th : pool)
        th.join();
    if (error)
        std::rethrow_exception(error);
    return out;
}

namespace {

std::vector<double> column(const std::vector<std::vector<double>>& rows, std::size_t j) {
    std::vector<double> v;
    v.reserve(rows.size());
    for (const auto& r : rows)
        v.push_back(r[j]);
    return v;
}

} // namespace

std::vector<GenpRow> table1_genp(const std::vector<std::size_t>& sizes, std::size_t trials,
                                 rnd::MultiplierKind kind, std::uint64_t seed, unsigned threads) {
    if (trials < 1)
        throw InvalidArgument("table1_genp: trials must be >= 1");
    for (std::size_t n : sizes)
        if (n < 4 || n % 2 != 0)
            throw InvalidArgument("table1_genp: sizes must be even and >= 4");
    std::vector<GenpRow> rows;
    for (std::size_t si = 0; si < sizes.size(); ++si) {
        const std::size_t n = sizes[si];
        auto run = [&, si, n](std::size_t t) -> std::vector<double> {
            const std::uint64_t base = (static_cast<std::uint64_t>(si) << 40) + t * 64ULL;
            rnd::IllBlockSystem sys = [&] {
                try {
                    return rnd::illblock_system(n, rnd::RngStream{seed, 0x1000000000000ULL + base});
                } catch (const ConstructionFailed& e) {
                    throw ConstructionFailed(std::string(e.what()) + " (trial " +
                                             std::to_string(t) + ")");
                }
            }();
            rnd::RngStream mul{seed, 0x2000000000000ULL + base};
            auto [y0, rep0] =
                genp::randomized_genp(sys.A, sys.b, kind, genp::MulSide::Left, 0, mul);
            auto [y1, rep1] =
                genp::randomized_genp(sys.A, sys.b, kind, genp::MulSide::Left, 1, mul);
            return {rep0.residual, rep1.residual, rep0.raw_residual};
        };
        auto samples = parallel_trials(trials, threads, run);
        TrialStats raw = make_stats(column(samples, 2));
        rows.push_back(GenpRow{n, 0, make_stats(column(samples, 0)), raw});
        rows.push_back(GenpRow{n, 1, make_stats(column(samples, 1)), raw});
    }
    return rows;
}

std::vector<LowRankRow> table23_lowrank(const std::vector<std::size_t>& ns,
                                        const std::vector<std::size_t>& qs, std::size_t trials,
                                        LowRankMultiplier kind, std::uint64_t seed,
                                        unsigned threads) {
    if (trials < 1)
        throw InvalidArgument("table23_lowrank: trials must be >= 1");
    for (std::size_t q : qs)
        for (std::size_t n : ns)
            if (q >= n)
                throw InvalidArgument("table23_lowrank: requires q < n for all pairs");
    std::vector<LowRankRow> rows;
    std::size_t pair_index = 0;
    for (std::size_t q : qs)
        for (std::size_t n : ns) {
            const std::size_t pi = pair_index++;
            auto run = [&, pi, q, n](std::size_t t) -> std::vector<double> {
                const std::uint64_t base = (static_cast<std::uint64_t>(pi) << 40) + t * 64ULL;
                auto sigmas = rnd::paper_sigma_profile(n, q);
                auto pf = rnd::profile_matrix_factors(
                    n, sigmas, rnd::RngStream{seed, 0x3000000000000ULL + base});
                Matrix g(1, 1);
                rnd::RngStream gs{seed, 0x4000000000000ULL + base};
                if (kind == LowRankMultiplier::Gaussian) {
                    g = rnd::gaussian_matrix(n, q, 0.0, 1.0, gs);
                } else {
                    auto spec = rnd::random_structured(
                        rnd::MultiplierKind{rnd::MultiplierTag::ToeplitzGaussian, 0.0, 1.0}, n, q,
                        gs);
                    g = structured::densify(spec);
                }
                Matrix b = pf.A.transpose().multiply(g);
                Matrix t_head = pf.T.leading_columns(q);
                Matrix y = dense::least_squares(b, t_head);
                double rn1 = dense::norm2(b.multiply(y).subtract(t_head));
                Matrix qmat = dense::qr_positive(b).Q;
                Matrix proj = pf.A.multiply(qmat).multiply(qmat.transpose());
                double rn2 = dense::norm2(pf.A.subtract(proj));
                return {rn1, rn2};
            };
            auto samples = parallel_trials(trials, threads, run);
            rows.push_back(LowRankRow{q, n, 1, make_stats(column(samples, 0))});
            rows.push_back(LowRankRow{q, n, 2, make_stats(column(samples, 1))});
        }
    return rows;
}

namespace {

// ||A^+|| as 1 / (smallest positive singular value).
double pinv_norm(const std::vector<double>& sigma) {
    for (auto it = sigma.rbegin(); it != sigma.rend(); ++it)
        if (*it > 0.0)
            return 1.0 / *it;
    return std::numeric_limits<double>::infinity();
}

TailCheckReport exceedance_report(std::string name, const std::vector<double>& x_grid,
                                  const std::vector<double>& values, double scale,
                                  std::size_t trials) {
    TailCheckReport rep;
    rep.bound_name = std::move(name);
    rep.grid = x_grid;
    rep.n_trials = trials;
    for (double x : x_grid) {
        double threshold = scale * x;
        std::size_t hits = 0;
        for (double v : values)
            if (v >= threshold)
                ++hits;
        rep.empirical_freq.push_back(static_cast<double>(hits) / static_cast<double>(trials));
        rep.theoretical_bound.push_back(1.0 / x);
    }
    rep.evaluate();
    return rep;
}

} // namespace

TailCheckReport tail_check_theorem31(std::size_t m, std::size_t n, double sigma,
                                     const std::vector<double>& x_grid, std::size_t trials,
                                     std::uint64_t seed, const Matrix* shift, unsigned threads) {
    if (sigma <= 0.0)
        throw InvalidArgument("tail_check_theorem31: sigma must be positive");
    for (double x : x_grid)
        if (!(x > 1.0))
            throw InvalidArgument("tail_check_theorem31: grid values must exceed 1");
    if (shift && (shift->rows() != m || shift->cols() != n))
        throw DimensionMismatch("tail_check_theorem31: shift shape mismatch");
    const std::size_t l = std::min(m, n);
    auto run = [&](std::size_t t) -> std::vector<double> {
        Matrix a = rnd::gaussian_matrix(m, n, 0.0, sigma,
                                        rnd::RngStream{seed, 0x5000000000000ULL + t * 8ULL});
        if (shift)
            a = a.subtract(*shift);
        return {pinv_norm(dense::svd(a).sigma)};
    };
    auto samples = parallel_trials(trials, threads, run);
    const double scale = 2.35 * std::sqrt(static_cast<double>(l)) / sigma;
    return exceedance_report("theorem31_pinv_tail", x_grid, column(samples, 0), scale, trials);
}

Theorem41Report tail_check_theorem41(const Matrix& m_fixed, std::size_t r,
                                     const std::vector<double>& x_grid, std::size_t trials,
                                     std::uint64_t seed, double sigma, unsigned threads) {
    if (r < 1)
        throw InvalidArgument("tail_check_theorem41: r must be >= 1");
    if (sigma <= 0.0)
        throw InvalidArgument("tail_check_theorem41: sigma must be positive");
    for (double x : x_grid)
        if (!(x > 1.0))
            throw InvalidArgument("tail_check_theorem41: grid values must exceed 1");
    const std::size_t m = m_fixed.rows();
    const std::size_t n = m_fixed.cols();

    auto msvd = dense::svd(m_fixed);
    const double m_pinv = pinv_norm(msvd.sigma);
    std::size_t rank_m = 0;
    for (double s : msvd.sigma)
        if (s > 1e-14 * msvd.sigma.front())
            ++rank_m;
    const std::size_t r_hat = std::min(r, rank_m);

    // ||M_j^+|| for the leading-block variant (M_j = first j columns of M).
    std::vector<double> mj_pinv(r);
    for (std::size_t j = 1; j <= std::min(r, n); ++j)
        mj_pinv[j - 1] = pinv_norm(dense::svd(m_fixed.leading_columns(j)).sigma);

    const std::size_t jmax = std::min(r, n);
    auto run = [&](std::size_t t) -> std::vector<double> {
        const std::uint64_t base = 0x6000000000000ULL + t * 64ULL;
        Matrix g = rnd::gaussian_matrix(r, m, 0.0, sigma, rnd::RngStream{seed, base});
        Matrix h = rnd::gaussian_matrix(n, r, 0.0, sigma, rnd::RngStream{seed, base + 1});
        Matrix gm = g.multiply(m_fixed);
        Matrix mh = m_fixed.multiply(h);
        auto gm_svd = dense::svd(gm);
        std::vector<double> out;
        out.push_back(pinv_norm(gm_svd.sigma));
        out.push_back(pinv_norm(dense::svd(mh).sigma));
        for (std::size_t j = 1; j <= jmax; ++j)
            out.push_back(pinv_norm(dense::svd(gm.block(0, 0, j, j)).sigma));
        const std::size_t full = std::min(r, n);
        bool full_rank = gm_svd.sigma.size() >= full &&
                         gm_svd.sigma[full - 1] > 1e-13 * gm_svd.sigma.front();
        out.push_back(full_rank ? 1.0 : 0.0);
        return out;
    };
    auto samples = parallel_trials(trials, threads, run);

    Theorem41Report rep;
    const double scale = 2.35 * std::sqrt(static_cast<double>(r_hat)) * m_pinv / sigma;
    rep.left = exceedance_report("theorem41_GM", x_grid, column(samples, 0), scale, trials);
    rep.right = exceedance_report("theorem41_MH", x_grid, column(samples, 1), scale, trials);
    for (std::size_t j = 1; j <= jmax; ++j) {
        const double bscale = 2.35 * std::sqrt(static_cast<double>(j)) * mj_pinv[j - 1] / sigma;
        rep.leading_blocks.push_back(exceedance_report("corollary42_block_j" + std::to_string(j),
                                                       x_grid, column(samples, 1 + j), bscale,
                                                       trials));
    }
    double full_hits = 0.0;
    for (const auto& s : samples)
        full_hits += s.back();
    rep.full_rank_freq = full_hits / static_cast<double>(trials);
    rep.pass = rep.left.pass && rep.right.pass;
    for (const auto& b : rep.leading_blocks)
        rep.pass = rep.pass && b.pass;
    return rep;
}

NormCondReport norm_cond_checks(std::size_t n, double sigma, std::size_t trials,
                                std::uint64_t seed, unsigned threads) {
    if (sigma <= 0.0 || sigma > 1.0)
        throw InvalidArgument("norm_cond_checks: requires 0 < sigma <= 1");
    auto run = [&](std::size_t t) -> std::vector<double> {
        Matrix a = rnd::gaussian_matrix(n, n, 0.0, sigma,
                                        rnd::RngStream{seed, 0x7000000000000ULL + t * 8ULL});
        auto f = dense::svd(a);
        double kappa = f.sigma.back() > 0.0 ? f.sigma.front() / f.sigma.back()
                                            : std::numeric_limits<double>::infinity();
        return {f.sigma.front(), kappa};
    };
    auto samples = parallel_trials(trials, threads, run);
    auto norms = column(samples, 0);
    auto kappas = column(samples, 1);

    NormCondReport rep;
    const double root_h = std::sqrt(static_cast<double>(n));
    rep.norm_check.bound_name = "theorem32_norm_cdf";
    rep.norm_check.lower_bound = true;
    rep.norm_check.n_trials = trials;
    for (double factor : {2.5, 3.0, 3.5, 4.0}) {
        double z = factor * sigma * root_h;
        double d = z - 2.0 * sigma * root_h;
        double bound = 1.0 - std::exp(-d * d / (2.0 * sigma * sigma));
        std::size_t hits = 0;
        for (double v : norms)
            if (v <= z)
                ++hits;
        rep.norm_check.grid.push_back(z);
        rep.norm_check.empirical_freq.push_back(static_cast<double>(hits) /
                                                static_cast<double>(trials));
        rep.norm_check.theoretical_bound.push_back(bound);
    }
    rep.norm_check.evaluate();

    rep.cond_check.bound_name = "theorem33_cond_cdf";
    rep.cond_check.lower_bound = true;
    rep.cond_check.n_trials = trials;
    for (double y : {5e2, 1e3, 2e3, 5e3, 1e4, 1e5, 1e6}) {
        double bound = 1.0 - (14.1 + 4.7 * std::sqrt(2.0 * std::log(y) / static_cast<double>(n))) *
                                 static_cast<double>(n) / (y * sigma);
        // Constants make the bound vacuous for small y; keep only grid points
        // where it says something.
        if (bound < 0.05)
            continue;
        std::size_t hits = 0;
        for (double v : kappas)
            if (v <= y)
                ++hits;
        rep.cond_check.grid.push_back(y);
        rep.cond_check.empirical_freq.push_back(static_cast<double>(hits) /
                                                static_cast<double>(trials));
        rep.cond_check.theoretical_bound.push_back(bound);
    }
    rep.cond_check.evaluate();
    rep.pass = rep.norm_check.pass && rep.cond_check.pass;
    return rep;
}

namespace {

// Exact determinant of a small integer matrix by cofactor expansion.
__int128 int_det(const std::vector<std::int64_t>& a, std::size_t n) {
    if (n == 1)
        return a[0];
    __int128 det = 0;
    std::vector<std::int64_t> minor((n - 1) * (n - 1));
    for (std::size_t c = 0; c < n; ++c) {
        for (std::size_t i = 1; i < n; ++i) {
            std::size_t mj = 0;
            for (std::size_t j = 0; j < n; ++j) {
                if (j == c)
                    continue;
                minor[(i - 1) * (n - 1) + mj++] = a[i * n + j];
            }
        }
        __int128 term = static_cast<__int128>(a[c]) * int_det(minor, n - 1);
        det += (c % 2 == 0) ? term : -term;
    }
    return det;
}

__int128 leading_minor(const std::vector<std::int64_t>& a, std::size_t n, std::size_t j) {
    std::vector<std::int64_t> block(j * j);
    for (std::size_t r = 0; r < j; ++r)
        for (std::size_t c = 0; c < j; ++c)
            block[r * j + c] = a[r * n + c];
    return int_det(block, j);
}

} // namespace

std::vector<TailCheckReport> appendixA_check(const std::vector<std::size_t>& k_list,
                                             const std::vector<std::size_t>& cardinalities,
                                             std::size_t trials, std::uint64_t seed,
                                             unsigned threads) {
    for (std::size_t k : k_list)
        if (k < 1 || k > 8)
            throw InvalidArgument("appendixA_check: k must lie in [1, 8]");
    for (std::size_t card : cardinalities)
        if (card < 1)
            throw InvalidArgument("appendixA_check: cardinalities must be positive");

    std::vector<TailCheckReport> reports;
    std::size_t combo = 0;
    for (int toeplitz = 0; toeplitz < 2; ++toeplitz)
        for (std::size_t k : k_list) {
            TailCheckReport singular, strong;
            const std::string cls = toeplitz ? "toeplitz" : "general";
            singular.bound_name = "appendixA_singular_" + cls + "_k" + std::to_string(k);
            strong.bound_name = "appendixA_strong_" + cls + "_k" + std::to_string(k);
            singular.n_trials = strong.n_trials = trials;
            for (std::size_t card : cardinalities) {
                const std::uint64_t base =
                    0x8000000000000ULL + (static_cast<std::uint64_t>(combo++) << 32);
                auto run = [&, k, card, toeplitz, base](std::size_t t) -> std::vector<double> {
                    rnd::Rng rng(rnd::RngStream{seed, base + t});
                    std::vector<std::int64_t> a(k * k);
                    if (toeplitz) {
                        std::vector<std::int64_t> diag(2 * k - 1);
                        for (auto& v : diag)
                            v = rng.uniform_int(1, static_cast<std::int64_t>(card));
                        for (std::size_t i = 0; i < k; ++i)
                            for (std::size_t j = 0; j < k; ++j)
                                a[i * k + j] = diag[i + (k - 1) - j];
                    } else {
                        for (auto& v : a)
                            v = rng.uniform_int(1, static_cast<std::int64_t>(card));
                    }
                    bool is_singular = int_det(a, k) == 0;
                    bool strong_fail = false;
                    for (std::size_t j = 1; j <= k; ++j)
                        if (leading_minor(a, k, j) == 0) {
                            strong_fail = true;
                            break;
                        }
                    return {is_singular ? 1.0 : 0.0, strong_fail ? 1.0 : 0.0};
                };
                auto samples = parallel_trials(trials, threads, run);
                double sfreq = 0.0, stfreq = 0.0;
                for (const auto& s : samples) {
                    sfreq += s[0];
                    stfreq += s[1];
                }
                sfreq /= static_cast<double>(trials);
                stfreq /= static_cast<double>(trials);
                singular.grid.push_back(static_cast<double>(card));
                singular.empirical_freq.push_back(sfreq);
                singular.theoretical_bound.push_back(
                    std::min(1.0, static_cast<double>(k) / static_cast<double>(card)));
                strong.grid.push_back(static_cast<double>(card));
                strong.empirical_freq.push_back(stfreq);
                strong.theoretical_bound.push_back(
                    std::min(1.0, static_cast<double>((k + 1) * k) /
                                      (2.0 * static_cast<double>(card))));
            }
            singular.evaluate();
            strong.evaluate();
            reports.push_back(std::move(singular));
            reports.push_back(std::move(strong));
        }
    return reports;
}

namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void append_stats_csv(std::string& out, const TrialStats& s) {
    out += fmt(s.min) + "," + fmt(s.max) + "," + fmt(s.mean) + "," + fmt(s.std_dev);
}

json stats_json(const TrialStats& s) {
    return json{{"n_trials", s.n_trials},
                {"min", s.min},
                {"max", s.max},
                {"mean", s.mean},
                {"std", s.std_dev}};
}

} // namespace

std::string genp_rows_csv(const std::vector<GenpRow>& rows) {
    std::string out = "n,refine,min,max,mean,std,raw_min,raw_max,raw_mean,raw_std\n";
    for (const auto& r : rows) {
        out += std::to_string(r.n) + "," + std::to_string(r.refine) + ",";
        append_stats_csv(out, r.stats);
        out += ",";
        append_stats_csv(out, r.raw_stats);
        out += "\n";
    }
    return out;
}

std::string genp_rows_json(const std::vector<GenpRow>& rows) {
    json arr = json::array();
    for (const auto& r : rows) {
        json rec = stats_json(r.stats);
        rec["check"] = "genp_bench";
        rec["n"] = r.n;
        rec["refine"] = r.refine;
        rec["raw"] = stats_json(r.raw_stats);
        arr.push_back(rec);
    }
    return arr.dump(2) + "\n";
}

std::string lowrank_rows_csv(const std::vector<LowRankRow>& rows) {
    std::string out = "q,flavor,n,min,max,mean,std\n";
    for (const auto& r : rows) {
        out += std::to_string(r.q) + ",rn" + std::to_string(r.flavor) + "," +
               std::to_string(r.n) + ",";
        append_stats_csv(out, r.stats);
        out += "\n";
    }
    return out;
}

std::string lowrank_rows_json(const std::vector<LowRankRow>& rows) {
    json arr = json::array();
    for (const auto& r : rows) {
        json rec = stats_json(r.stats);
        rec["check"] = "lowrank_bench";
        rec["q"] = r.q;
        rec["n"] = r.n;
        rec["flavor"] = "rn" + std::to_string(r.flavor);
        arr.push_back(rec);
    }
    return arr.dump(2) + "\n";
}

std::string reports_csv(const std::vector<TailCheckReport>& reports) {
    std::string out = "bound_name,grid,empirical_freq,theoretical_bound,pass\n";
    for (const auto& r : reports)
        for (std::size_t i = 0; i < r.grid.size(); ++i)
            out += r.bound_name + "," + fmt(r.grid[i]) + "," + fmt(r.empirical_freq[i]) + "," +
                   fmt(r.theoretical_bound[i]) + "," + (r.pass ? "1" : "0") + "\n";
    return out;
}

std::string reports_json(const std::vector<TailCheckReport>& reports) {
    json arr = json::array();
    for (const auto& r : reports) {
        arr.push_back(json{{"check", r.bound_name},
                           {"n_trials", r.n_trials},
                           {"grid", r.grid},
                           {"empirical_freq", r.empirical_freq},
                           {"theoretical_bound", r.theoretical_bound},
                           {"lower_bound", r.lower_bound},
                           {"pass", r.pass}});
    }
    return arr.dump(2) + "\n";
}

unsigned resolve_threads(int flag_value) {
    if (flag_value > 0)
        return static_cast<unsigned>(flag_value);
    if (const char* env = std::getenv("RANDLA_THREADS")) {
        long v = std::strtol(env, nullptr, 10);
        if (v > 0)
            return static_cast<unsigned>(v);
    }
    return 1;
}

} // namespace randla::bench
