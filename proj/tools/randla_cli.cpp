#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "randla/bench.hpp"
#include "randla/dense_core.hpp"
#include "randla/errors.hpp"
#include "randla/lowrank.hpp"
#include "randla/matrix_io.hpp"
#include "randla/random_gen.hpp"
#include "randla/tt.hpp"

namespace {

using namespace randla;

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

rnd::MultiplierKind parse_multiplier(const std::string& name) {
    using Tag = rnd::MultiplierTag;
    if (name == "gaussian")
        return {Tag::Gaussian, 0.0, 1.0};
    if (name == "uniform")
        return {Tag::UniformPm1, 0.0, 1.0};
    if (name == "toeplitz")
        return {Tag::ToeplitzGaussian, 0.0, 1.0};
    if (name == "circulant")
        return {Tag::CirculantGaussian, 0.0, 1.0};
    if (name == "circulant-sign")
        return {Tag::CirculantSign, 0.0, 1.0};
    if (name == "householder-sign")
        return {Tag::HouseholderSign, 0.0, 1.0};
    throw CLI::ValidationError("--multiplier", "unknown multiplier: " + name);
}

void write_out(const std::string& path, const std::string& payload) {
    if (path.empty())
        return;
    std::ofstream f(path);
    if (!f)
        throw IoError("cannot open output file: " + path);
    f << payload;
}

void emit(const std::string& out, const std::string& format, const std::string& csv,
          const std::string& json) {
    write_out(out, format == "json" ? json : csv);
}

int run_genp(const std::vector<std::size_t>& sizes, std::size_t trials,
             const std::string& multiplier, std::uint64_t seed, const std::string& out,
             const std::string& format, unsigned threads) {
    auto rows = bench::table1_genp(sizes, trials, parse_multiplier(multiplier), seed, threads);
    std::printf("n      refine  min        max        mean       std\n");
    for (const auto& r : rows)
        std::printf("%-6zu %-7d %s  %s  %s  %s\n", r.n, r.refine, fmt(r.stats.min).c_str(),
                    fmt(r.stats.max).c_str(), fmt(r.stats.mean).c_str(),
                    fmt(r.stats.std_dev).c_str());
    emit(out, format, bench::genp_rows_csv(rows), bench::genp_rows_json(rows));
    return 0;
}

int run_lowrank(const std::vector<std::size_t>& ns, const std::vector<std::size_t>& qs,
                std::size_t trials, const std::string& multiplier, std::uint64_t seed,
                const std::string& out, const std::string& format, unsigned threads) {
    bench::LowRankMultiplier kind;
    if (multiplier == "gaussian")
        kind = bench::LowRankMultiplier::Gaussian;
    else if (multiplier == "toeplitz")
        kind = bench::LowRankMultiplier::ToeplitzGaussian;
    else
        throw CLI::ValidationError("--multiplier", "lowrank-bench takes gaussian or toeplitz");
    auto rows = bench::table23_lowrank(ns, qs, trials, kind, seed, threads);
    std::printf("q      rn   n      min        max        mean       std\n");
    for (const auto& r : rows)
        std::printf("%-6zu rn%d  %-6zu %s  %s  %s  %s\n", r.q, r.flavor, r.n,
                    fmt(r.stats.min).c_str(), fmt(r.stats.max).c_str(), fmt(r.stats.mean).c_str(),
                    fmt(r.stats.std_dev).c_str());
    emit(out, format, bench::lowrank_rows_csv(rows), bench::lowrank_rows_json(rows));
    return 0;
}

int run_nrank(const std::string& in, std::size_t n, std::size_t rho, std::size_t rho_plus,
              double kappa, const std::string& policy, std::uint64_t seed) {
    Matrix a(1, 1);
    if (!in.empty()) {
        a = io::read_matrix_market(in);
    } else {
        auto sigmas = rnd::paper_sigma_profile(n, rho);
        a = rnd::profile_matrix(n, sigmas, rnd::RngStream{seed, 1});
    }
    if (rho_plus == 0)
        rho_plus = std::min(a.rows(), a.cols());
    auto pol = (policy == "linear-down") ? lowrank::SearchPolicy::LinearDown
                                         : lowrank::SearchPolicy::Binary;
    auto res = lowrank::nrank_search(a, 0, rho_plus, kappa, pol, rnd::RngStream{seed, 2});
    std::printf("numerical_rank %zu\n", res.rho);
    return 0;
}

int run_tt(const std::string& in, std::vector<std::size_t> dims, std::vector<std::size_t> ranks,
           double tol, bool randomized, std::size_t oversample, std::uint64_t seed,
           const std::string& out) {
    tt::DenseTensor t({2, 2});
    if (!in.empty()) {
        t = in.size() > 4 && in.substr(in.size() - 4) == ".csv" ? tt::read_tensor_csv(in)
                                                                : tt::read_tensor_binary(in);
    } else {
        if (dims.empty())
            dims = {4, 4, 4, 4};
        if (ranks.empty())
            ranks.assign(dims.size() - 1, 3);
        auto train = tt::random_train(dims, ranks, rnd::RngStream{seed, 3});
        t = tt::tt_reconstruct(train);
    }
    tt::TtTrain train;
    if (randomized) {
        if (ranks.empty())
            throw CLI::ValidationError("--ranks", "randomized mode requires explicit ranks");
        train = tt::tt_randomized(t, ranks, oversample, rnd::RngStream{seed, 4});
    } else if (!ranks.empty()) {
        train = tt::tt_svd(t, ranks).train;
    } else {
        train = tt::tt_svd(t, tol).train;
    }
    double err = tt::tt_error(t, train);
    std::printf("ranks");
    for (std::size_t r : train.ranks())
        std::printf(" %zu", r);
    std::printf("\nerror_frobenius %s\nrelative_error %s\n", fmt(err).c_str(),
                fmt(err / t.frobenius_norm()).c_str());
    if (!out.empty()) {
        tt::DenseTensor rec = tt::tt_reconstruct(train);
        if (out.size() > 4 && out.substr(out.size() - 4) == ".csv")
            tt::write_tensor_csv(out, rec);
        else
            tt::write_tensor_binary(out, rec);
    }
    return 0;
}

int run_validate(const std::string& check, std::size_t n, std::size_t trials, std::uint64_t seed,
                 const std::string& out, const std::string& format, unsigned threads) {
    std::vector<bench::TailCheckReport> reports;
    const std::vector<double> x_grid{2.0, 5.0, 10.0};
    bool all = check == "all";
    if (all || check == "theorem31")
        reports.push_back(bench::tail_check_theorem31(n, n, 1.0, x_grid, trials, seed, nullptr,
                                                      threads));
    if (all || check == "theorem41") {
        Matrix m = rnd::profile_matrix(n, rnd::paper_sigma_profile(n, std::max<std::size_t>(1, n / 2)),
                                       rnd::RngStream{seed, 11});
        auto rep = bench::tail_check_theorem41(m, std::max<std::size_t>(1, n / 2), x_grid, trials,
                                               seed, 1.0, threads);
        reports.push_back(rep.left);
        reports.push_back(rep.right);
        for (auto& b : rep.leading_blocks)
            reports.push_back(std::move(b));
    }
    if (all || check == "normcond") {
        auto rep = bench::norm_cond_checks(n, 1.0, trials, seed, threads);
        reports.push_back(rep.norm_check);
        reports.push_back(rep.cond_check);
    }
    if (all || check == "appendixA")
        for (auto& r : bench::appendixA_check({2, 3}, {16, 64}, trials, seed, threads))
            reports.push_back(std::move(r));
    if (reports.empty())
        throw CLI::ValidationError(
            "--check", "unknown check (theorem31|theorem41|normcond|appendixA|all): " + check);
    bool pass = true;
    for (const auto& r : reports) {
        std::printf("%-32s %s\n", r.bound_name.c_str(), r.pass ? "pass" : "FAIL");
        pass = pass && r.pass;
    }
    emit(out, format, bench::reports_csv(reports), bench::reports_json(reports));
    return pass ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Randomized linear algebra benchmarks and validation"};
    app.require_subcommand(1);

    std::vector<std::size_t> sizes{64, 256}, ns{64}, qs{8}, dims, ranks;
    std::size_t trials = 100, n = 16, rho = 8, rho_plus = 0, oversample = 0;
    std::uint64_t seed = 1;
    std::string multiplier = "circulant-sign", out, format = "csv", in, policy = "binary",
                check = "all";
    double kappa = 1e6, tol = 1e-10;
    int threads_flag = 0;
    bool randomized = false;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--seed", seed, "RNG seed");
        cmd->add_option("--out", out, "machine-readable output path");
        cmd->add_option("--format", format, "output format (csv|json)")
            ->check(CLI::IsMember({"csv", "json"}));
        cmd->add_option("--threads", threads_flag, "worker threads (env RANDLA_THREADS fallback)");
    };

    auto* genp = app.add_subcommand("genp-bench", "randomized GENP residual table");
    genp->add_option("--sizes", sizes, "matrix sizes (even)");
    genp->add_option("--trials", trials, "trials per size");
    genp->add_option("--multiplier", multiplier, "multiplier family");
    add_common(genp);

    auto* lr = app.add_subcommand("lowrank-bench", "low-rank sketch residual table");
    lr->add_option("--n", ns, "matrix sizes");
    lr->add_option("--q", qs, "numerical ranks");
    lr->add_option("--trials", trials, "trials per pair");
    lr->add_option("--multiplier", multiplier, "gaussian|toeplitz")->default_str("gaussian");
    add_common(lr);

    auto* nr = app.add_subcommand("nrank", "numerical rank search");
    nr->add_option("--in", in, "input matrix (Matrix Market)");
    nr->add_option("--n", n, "generated profile size");
    nr->add_option("--rho", rho, "generated profile numerical rank");
    nr->add_option("--rho-plus", rho_plus, "upper bound for the search");
    nr->add_option("--kappa", kappa, "conditioning threshold");
    nr->add_option("--policy", policy, "binary|linear-down")
        ->check(CLI::IsMember({"binary", "linear-down"}));
    add_common(nr);

    auto* ttc = app.add_subcommand("tt-compress", "tensor-train compression");
    ttc->add_option("--in", in, "input tensor (.csv or binary)");
    ttc->add_option("--dims", dims, "generated tensor dimensions");
    ttc->add_option("--ranks", ranks, "target TT ranks");
    ttc->add_option("--tol", tol, "tolerance for rank selection");
    ttc->add_flag("--randomized", randomized, "use the randomized sweep");
    ttc->add_option("--oversample", oversample, "sketch oversampling");
    add_common(ttc);

    auto* val = app.add_subcommand("validate", "Monte Carlo tail-bound checks");
    val->add_option("--check", check, "theorem31|theorem41|normcond|appendixA|all");
    val->add_option("--n", n, "matrix size");
    val->add_option("--trials", trials, "Monte Carlo trials");
    add_common(val);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        unsigned threads = randla::bench::resolve_threads(threads_flag);
        if (genp->parsed())
            return run_genp(sizes, trials, multiplier, seed, out, format, threads);
        if (lr->parsed()) {
            if (multiplier == "circulant-sign")
                multiplier = "gaussian"; // subcommand default
            return run_lowrank(ns, qs, trials, multiplier, seed, out, format, threads);
        }
        if (nr->parsed())
            return run_nrank(in, n, rho, rho_plus, kappa, policy, seed);
        if (ttc->parsed())
            return run_tt(in, dims, ranks, tol, randomized, oversample, seed, out);
        if (val->parsed())
            return run_validate(check, n, trials, seed, out, format, threads);
    } catch (const CLI::ValidationError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const randla::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
