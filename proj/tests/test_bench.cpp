#include <doctest.h>

#include <cmath>
#include <cstdlib>

#include "helpers.hpp"
#include "randla/bench.hpp"

using namespace randla;

TEST_CASE("make_stats: fields agree with direct recomputation") {
    std::vector<double> s{3.0, 1.0, 2.0, 2.0};
    auto st = bench::make_stats(s);
    CHECK(st.n_trials == 4);
    CHECK(st.min == 1.0);
    CHECK(st.max == 3.0);
    CHECK(st.mean == doctest::Approx(2.0));
    double var = 0.0;
    for (double v : s)
        var += (v - 2.0) * (v - 2.0);
    CHECK(st.std_dev == doctest::Approx(std::sqrt(var / 4.0)));
    CHECK(st.min <= st.mean);
    CHECK(st.mean <= st.max);
    CHECK_THROWS_AS(bench::make_stats({}), InvalidArgument);
}

TEST_CASE("TailCheckReport: three-sigma pass rule") {
    bench::TailCheckReport r;
    r.bound_name = "demo";
    r.grid = {2.0};
    r.n_trials = 100;
    r.theoretical_bound = {0.5};
    // Upper bound: pass needs empirical <= bound + 3 * sqrt(f (1-f) / n),
    // with the binomial std taken at the empirical frequency.
    r.empirical_freq = {0.56};
    r.evaluate();
    CHECK(r.pass); // margin at f=0.56 is ~0.149, so 0.56 <= 0.5 + 0.149
    r.empirical_freq = {0.9};
    r.evaluate();
    CHECK_FALSE(r.pass); // 0.9 > 0.5 + 0.09
    // Lower-bound mode flips the inequality.
    r.lower_bound = true;
    r.empirical_freq = {0.5};
    r.theoretical_bound = {0.4};
    r.evaluate();
    CHECK(r.pass);
    r.empirical_freq = {0.1};
    r.evaluate();
    CHECK_FALSE(r.pass);
}

TEST_CASE("binomial_std") {
    CHECK(bench::TailCheckReport::binomial_std(0.5, 100) == doctest::Approx(0.05));
    CHECK(bench::TailCheckReport::binomial_std(0.0, 100) == 0.0);
}

TEST_CASE("table1_genp: deterministic across thread counts") {
    auto serial = bench::table1_genp({16}, 4, {rnd::MultiplierTag::CirculantSign, 0.0, 1.0}, 99, 1);
    auto threaded =
        bench::table1_genp({16}, 4, {rnd::MultiplierTag::CirculantSign, 0.0, 1.0}, 99, 4);
    REQUIRE(serial.size() == threaded.size());
    for (std::size_t i = 0; i < serial.size(); ++i) {
        REQUIRE(serial[i].stats.samples.size() == threaded[i].stats.samples.size());
        for (std::size_t j = 0; j < serial[i].stats.samples.size(); ++j) {
            CHECK(serial[i].stats.samples[j] == threaded[i].stats.samples[j]);
            CHECK(serial[i].raw_stats.samples[j] == threaded[i].raw_stats.samples[j]);
        }
    }
    // Rows come in (refine 0, refine 1) pairs per size.
    CHECK(serial.size() == 2);
    CHECK(serial[0].refine == 0);
    CHECK(serial[1].refine == 1);
}

TEST_CASE("table23_lowrank: repeatability and flavor layout") {
    auto a = bench::table23_lowrank({32}, {4}, 3, bench::LowRankMultiplier::Gaussian, 7, 1);
    auto b = bench::table23_lowrank({32}, {4}, 3, bench::LowRankMultiplier::Gaussian, 7, 3);
    REQUIRE(a.size() == 2); // rn1 and rn2 rows
    CHECK(a[0].flavor == 1);
    CHECK(a[1].flavor == 2);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a[i].stats.samples.size(); ++j)
            CHECK(a[i].stats.samples[j] == b[i].stats.samples[j]);
    CHECK_THROWS_AS(
        bench::table23_lowrank({8}, {9}, 1, bench::LowRankMultiplier::Gaussian, 7, 1),
        InvalidArgument); // q must stay below n
}

TEST_CASE("tail_check_theorem31: single-trial determinism and grid validation") {
    auto r1 = bench::tail_check_theorem31(8, 8, 1.0, {2.0, 5.0}, 1, 5, nullptr, 1);
    auto r2 = bench::tail_check_theorem31(8, 8, 1.0, {2.0, 5.0}, 1, 5, nullptr, 1);
    CHECK(r1.empirical_freq == r2.empirical_freq);
    CHECK(r1.n_trials == 1);
    CHECK_THROWS_AS(bench::tail_check_theorem31(8, 8, 1.0, {0.5}, 1, 5, nullptr, 1),
                    InvalidArgument); // bound is vacuous for x <= 1
}

TEST_CASE("appendixA_check: k=1 never produces a singular 1x1 draw") {
    auto reports = bench::appendixA_check({1}, {16}, 200, 3, 2);
    REQUIRE(!reports.empty());
    for (const auto& r : reports)
        if (r.bound_name.find("singular") != std::string::npos &&
            r.bound_name.find("strong") == std::string::npos)
            for (double f : r.empirical_freq)
                CHECK(f == 0.0); // entries are drawn from {1,...,16}, never 0
}

TEST_CASE("parallel_trials: slot-exact against the serial loop") {
    auto f = [](std::size_t i) {
        return std::vector<double>{static_cast<double>(i), static_cast<double>(i * i)};
    };
    auto serial = bench::parallel_trials(17, 1, f);
    auto par = bench::parallel_trials(17, 5, f);
    REQUIRE(serial.size() == 17);
    for (std::size_t i = 0; i < 17; ++i) {
        CHECK(serial[i] == par[i]);
        CHECK(serial[i][0] == static_cast<double>(i));
    }
}

TEST_CASE("emitters: csv headers and json validity markers") {
    auto rows = bench::table1_genp({16}, 2, {rnd::MultiplierTag::CirculantSign, 0.0, 1.0}, 1, 1);
    auto csv = bench::genp_rows_csv(rows);
    CHECK(csv.rfind("n,refine,min,max,mean,std", 0) == 0);
    auto json = bench::genp_rows_json(rows);
    CHECK(json.front() == '[');
    CHECK(json.back() == '\n');
    auto lr = bench::table23_lowrank({16}, {2}, 2, bench::LowRankMultiplier::Gaussian, 1, 1);
    CHECK(bench::lowrank_rows_csv(lr).rfind("q,flavor,n,min,max,mean,std", 0) == 0);
    auto rep = bench::tail_check_theorem31(4, 4, 1.0, {2.0}, 10, 1, nullptr, 1);
    CHECK(bench::reports_csv({rep}).rfind("bound_name,grid,", 0) == 0);
}

TEST_CASE("resolve_threads: flag beats environment beats default") {
    CHECK(bench::resolve_threads(3) == 3);
    unsetenv("RANDLA_THREADS");
    CHECK(bench::resolve_threads(0) == 1);
    setenv("RANDLA_THREADS", "6", 1);
    CHECK(bench::resolve_threads(0) == 6);
    CHECK(bench::resolve_threads(2) == 2);
    unsetenv("RANDLA_THREADS");
}
