#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <string>

#include "helpers.hpp"
#include "randla/dense_core.hpp"
#include "randla/tt.hpp"

using namespace randla;

namespace {

tt::DenseTensor dense_from_train(const tt::TtTrain& train) { return tt::tt_reconstruct(train); }

double tensor_rel_err(const tt::DenseTensor& a, const tt::DenseTensor& b) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double d = a.data()[i] - b.data()[i];
        num += d * d;
        den += a.data()[i] * a.data()[i];
    }
    return std::sqrt(num) / (std::sqrt(den) + 1e-300);
}

tt::DenseTensor noisy(const tt::DenseTensor& t, double eps, rnd::RngStream stream) {
    tt::DenseTensor out = t;
    rnd::Rng r(stream);
    for (double& v : out.data())
        v += eps * r.gaussian();
    return out;
}

} // namespace

TEST_CASE("unfold: 2x2 layouts") {
    tt::DenseTensor t({2, 2}, {1.0, 2.0, 3.0, 4.0}); // first index fastest
    Matrix u1 = tt::unfold(t, 1);
    REQUIRE(u1.rows() == 2);
    REQUIRE(u1.cols() == 2);
    CHECK(u1(0, 0) == 1.0);
    CHECK(u1(1, 0) == 2.0);
    CHECK(u1(0, 1) == 3.0);
    CHECK(u1(1, 1) == 4.0);
}

TEST_CASE("unfold: norm preservation and rank-one structure") {
    tt::TtTrain rank1 = tt::random_train({3, 4, 5}, {1, 1}, rnd::RngStream{51, 0});
    tt::DenseTensor t = dense_from_train(rank1);
    for (std::size_t k = 1; k < 3; ++k) {
        Matrix u = tt::unfold(t, k);
        CHECK(oracle::frobenius(u) == doctest::Approx(t.frobenius_norm()));
        CHECK(dense::numerical_rank(u, 1e-10) == 1);
    }
}

TEST_CASE("tt_svd: rank-one tensor is reproduced exactly") {
    tt::TtTrain rank1 = tt::random_train({3, 3, 3}, {1, 1}, rnd::RngStream{51, 1});
    tt::DenseTensor t = dense_from_train(rank1);
    auto res = tt::tt_svd(t, std::vector<std::size_t>{1, 1});
    CHECK(res.train.ranks() == std::vector<std::size_t>{1, 1});
    CHECK(tt::tt_error(t, res.train) < 1e-12 * t.frobenius_norm());
}

TEST_CASE("tt_svd: exact-rank round trip at dims (4,4,4,4)") {
    for (std::uint64_t id = 0; id < 5; ++id) {
        tt::TtTrain src = tt::random_train({4, 4, 4, 4}, {2, 3, 2}, rnd::RngStream{51, 10 + id});
        tt::DenseTensor t = dense_from_train(src);
        auto res = tt::tt_svd(t, std::vector<std::size_t>{2, 3, 2});
        CHECK(tt::tt_error(t, res.train) <= 1e-10 * t.frobenius_norm());
        for (double tail : res.sweep_tails)
            CHECK(tail <= 1e-10 * t.frobenius_norm());
    }
}

TEST_CASE("tt_svd: tolerance mode finds the exact ranks") {
    tt::TtTrain src = tt::random_train({4, 4, 4}, {2, 2}, rnd::RngStream{51, 2});
    tt::DenseTensor t = dense_from_train(src);
    auto res = tt::tt_svd(t, 1e-10);
    auto rk = res.train.ranks();
    REQUIRE(rk.size() == 2);
    CHECK(rk[0] <= 2);
    CHECK(rk[1] <= 2);
    CHECK(tt::tt_error(t, res.train) <= 1e-9 * t.frobenius_norm());
}

TEST_CASE("tt_svd: rank vector validation") {
    tt::DenseTensor t({2, 2, 2});
    CHECK_THROWS_AS(tt::tt_svd(t, std::vector<std::size_t>{2}), InvalidArgument);
    CHECK_THROWS_AS(tt::tt_svd(t, std::vector<std::size_t>{5, 5}), RankTooLarge);
}

TEST_CASE("tt_randomized: exact-rank tensors, no oversampling") {
    for (std::uint64_t id = 0; id < 5; ++id) {
        tt::TtTrain src = tt::random_train({4, 4, 4, 4}, {2, 3, 2}, rnd::RngStream{51, 20 + id});
        tt::DenseTensor t = dense_from_train(src);
        tt::TtTrain out =
            tt::tt_randomized(t, {2, 3, 2}, 0, rnd::RngStream{51, 30 + id});
        CHECK(tt::tt_error(t, out) <= 1e-8 * t.frobenius_norm());
    }
}

TEST_CASE("tt_randomized: oversampling matches the deterministic sweep") {
    int close = 0;
    for (std::uint64_t id = 0; id < 10; ++id) {
        tt::TtTrain src = tt::random_train({4, 4, 4}, {2, 2}, rnd::RngStream{52, id});
        tt::DenseTensor t = noisy(dense_from_train(src), 1e-3, rnd::RngStream{52, 100 + id});
        auto det = tt::tt_svd(t, std::vector<std::size_t>{2, 2});
        tt::TtTrain rnd_train = tt::tt_randomized(t, {2, 2}, 4, rnd::RngStream{52, 200 + id});
        double e_det = tt::tt_error(t, det.train);
        double e_rnd = tt::tt_error(t, rnd_train);
        if (e_rnd <= 2.0 * e_det + 1e-12)
            ++close;
    }
    CHECK(close >= 8);
}

TEST_CASE("tt_svd: noisy tensor error stays near optimal") {
    tt::TtTrain src = tt::random_train({4, 4, 4, 4}, {2, 2, 2}, rnd::RngStream{51, 3});
    tt::DenseTensor clean = dense_from_train(src);
    tt::DenseTensor t = noisy(clean, 1e-6, rnd::RngStream{51, 4});
    auto res = tt::tt_svd(t, std::vector<std::size_t>{2, 2, 2});
    // Optimal error is bounded below by the distance to the clean rank-(2,2,2)
    // tensor; TT-SVD is quasi-optimal within sqrt(d-1).
    double base = tensor_rel_err(t, clean) * t.frobenius_norm();
    CHECK(tt::tt_error(t, res.train) <= 10.0 * std::sqrt(3.0) * base);
}

TEST_CASE("tt error bound: squared error below the sum of squared tails") {
    for (std::uint64_t id = 0; id < 10; ++id) {
        tt::TtTrain src = tt::random_train({4, 4, 4, 4}, {3, 3, 3}, rnd::RngStream{53, id});
        tt::DenseTensor t = noisy(dense_from_train(src), 1e-4, rnd::RngStream{53, 100 + id});
        auto res = tt::tt_svd(t, std::vector<std::size_t>{2, 2, 2});
        double err = tt::tt_error(t, res.train);
        double rhs = 0.0;
        for (double tail : res.sweep_tails)
            rhs += tail * tail;
        double nf = t.frobenius_norm();
        CHECK(err * err <= rhs + 1e-20 * nf * nf);
    }
}

TEST_CASE("tt_svd: error decreases monotonically in the rank") {
    tt::TtTrain src = tt::random_train({4, 4, 4}, {3, 3}, rnd::RngStream{51, 5});
    tt::DenseTensor t = noisy(dense_from_train(src), 1e-3, rnd::RngStream{51, 6});
    double prev = t.frobenius_norm();
    for (std::size_t r = 1; r <= 4; ++r) {
        auto res = tt::tt_svd(t, std::vector<std::size_t>{r, r});
        double err = tt::tt_error(t, res.train);
        CHECK(err <= prev + 1e-12);
        prev = err;
    }
}

TEST_CASE("tt_reconstruct: two-core train and all-ones cores") {
    tt::TtTrain src = tt::random_train({3, 5}, {2}, rnd::RngStream{51, 7});
    tt::DenseTensor t = tt::tt_reconstruct(src);
    // Entry (i, j) = sum_a core1(0, i, a) core2(a, j, 0).
    const auto& c1 = src.cores[0];
    const auto& c2 = src.cores[1];
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 5; ++j) {
            double s = 0.0;
            for (std::size_t a = 0; a < 2; ++a)
                s += c1.at(0, i, a) * c2.at(a, j, 0);
            CHECK(t.data()[i + 3 * j] == doctest::Approx(s));
        }
    tt::TtTrain ones;
    ones.cores.push_back({1, 2, 2, std::vector<double>(4, 1.0)});
    ones.cores.push_back({2, 2, 1, std::vector<double>(4, 1.0)});
    tt::DenseTensor to = tt::tt_reconstruct(ones);
    for (double v : to.data())
        CHECK(v == 2.0); // every entry sums two unit paths
}

TEST_CASE("tt_reconstruct: broken chains and size cap are rejected") {
    tt::TtTrain bad;
    bad.cores.push_back({1, 2, 2, std::vector<double>(4, 1.0)});
    bad.cores.push_back({3, 2, 1, std::vector<double>(6, 1.0)}); // 2 != 3
    CHECK_THROWS_AS(tt::tt_reconstruct(bad), DimensionMismatch);
    tt::TtTrain big = tt::random_train({10, 10, 10}, {1, 1}, rnd::RngStream{51, 8});
    CHECK_THROWS_AS(tt::tt_reconstruct(big, 100), TooLarge);
}

TEST_CASE("tt_error: zero train") {
    tt::TtTrain zero;
    zero.cores.push_back({1, 3, 1, std::vector<double>(3, 0.0)});
    zero.cores.push_back({1, 1, 1, std::vector<double>(1, 0.0)});
    tt::DenseTensor t({3, 1}, {3.0, 0.0, 4.0});
    CHECK(tt::tt_error(t, zero) == doctest::Approx(5.0));
}

TEST_CASE("tensor io: binary and csv round trips") {
    tt::TtTrain src = tt::random_train({3, 4, 2}, {2, 2}, rnd::RngStream{51, 9});
    tt::DenseTensor t = dense_from_train(src);
    std::string bin = "/tmp/randla_test_tensor.bin";
    std::string csv = "/tmp/randla_test_tensor.csv";
    tt::write_tensor_binary(bin, t);
    tt::DenseTensor tb = tt::read_tensor_binary(bin);
    REQUIRE(tb.dims() == t.dims());
    for (std::size_t i = 0; i < t.size(); ++i)
        CHECK(tb.data()[i] == t.data()[i]); // binary is bit exact
    tt::write_tensor_csv(csv, t);
    tt::DenseTensor tc = tt::read_tensor_csv(csv);
    REQUIRE(tc.dims() == t.dims());
    for (std::size_t i = 0; i < t.size(); ++i)
        CHECK(tc.data()[i] == t.data()[i]); // 17 significant digits
    std::remove(bin.c_str());
    std::remove(csv.c_str());
}
