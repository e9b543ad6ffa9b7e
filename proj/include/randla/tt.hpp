#pragma once

#include <string>
#include <vector>

#include "randla/matrix.hpp"
#include "randla/random_gen.hpp"

namespace randla::tt {

/// Dense d-dimensional tensor, first index fastest-varying.
class DenseTensor {
  public:
    DenseTensor(std::vector<std::size_t> dims);
    DenseTensor(std::vector<std::size_t> dims, std::vector<double> entries);

    const std::vector<std::size_t>& dims() const { return dims_; }
    std::size_t order() const { return dims_.size(); }
    std::size_t size() const { return data_.size(); }

    const std::vector<double>& data() const { return data_; }
    std::vector<double>& data() { return data_; }

    double frobenius_norm() const;

  private:
    std::vector<std::size_t> dims_;
    std::vector<double> data_;
};

/// Order-3 TT core of shape (r_left, n, r_right), index (a, i, b) stored with
/// a fastest.
struct TtCore {
    std::size_t r_left;
    std::size_t n;
    std::size_t r_right;
    std::vector<double> data; // a + r_left * (i + n * b)

    double& at(std::size_t a, std::size_t i, std::size_t b) {
        return data[a + r_left * (i + n * b)];
    }
    double at(std::size_t a, std::size_t i, std::size_t b) const {
        return data[a + r_left * (i + n * b)];
    }
};

struct TtTrain {
    std::vector<TtCore> cores; // r_0 = r_d = 1, adjacent ranks chain
    std::vector<std::size_t> ranks() const;
};

/// k-th unfolding: rows indexed by (i_1..i_k) with i_1 fastest, columns by
/// (i_{k+1}..i_d) with i_{k+1} fastest; a pure relabeling of the entries.
Matrix unfold(const DenseTensor& t, std::size_t k);

/// Deterministic TT-SVD sweep truncated to the given ranks. Per-sweep
/// truncation tails (Frobenius) are returned alongside the train.
struct TtSvdResult {
    TtTrain train;
    std::vector<double> sweep_tails;
};

TtSvdResult tt_svd(const DenseTensor& t, const std::vector<std::size_t>& ranks);

/// Tolerance mode: minimal r_k with sigma_{r_k+1} <= tol * ||T||_F / sqrt(d-1).
TtSvdResult tt_svd(const DenseTensor& t, double tol);

/// Randomized sweep: each truncated SVD of the carried unfolding is replaced
/// by a Gaussian sketch of width r_k + oversample, orthonormalization, and
/// one small SVD of the projected matrix; no SVD of a full unfolding is
/// taken. Retries with a fresh stream (up to 3 times) on a rank-deficient
/// sketch.
TtTrain tt_randomized(const DenseTensor& t, const std::vector<std::size_t>& ranks,
                      std::size_t oversample, rnd::RngStream stream);

/// Contract the cores back into a dense tensor (capped at `max_entries`).
DenseTensor tt_reconstruct(const TtTrain& train, std::size_t max_entries = 100000000);

/// ||T - reconstruct(train)||_F.
double tt_error(const DenseTensor& t, const TtTrain& train);

/// Tensor I/O: little-endian flat binary (u64 order, u64 dims, f64 entries)
/// and CSV with a dims header line.
void write_tensor_binary(const std::string& path, const DenseTensor& t);
DenseTensor read_tensor_binary(const std::string& path);
void write_tensor_csv(const std::string& path, const DenseTensor& t);
DenseTensor read_tensor_csv(const std::string& path);

/// Random train with the given dims/ranks (Gaussian cores), a test input
/// generator for exact-rank experiments.
TtTrain random_train(const std::vector<std::size_t>& dims, const std::vector<std::size_t>& ranks,
                     rnd::RngStream stream);

} // namespace randla::tt
