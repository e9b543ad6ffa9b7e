#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "randla/matrix.hpp"
#include "randla/structured.hpp"

namespace randla::rnd {

/// Reproducible random stream identity: the same (seed, stream_id) always
/// replays the same draw sequence; distinct stream_ids give independent
/// sequences (one per trial in the benchmark harness).
struct RngStream {
    std::uint64_t seed = 0;
    std::uint64_t stream_id = 0;

    RngStream with_stream(std::uint64_t id) const { return RngStream{seed, id}; }
};

/// Draw source for one stream. The engine and all distribution transforms
/// are spelled out here (mt19937_64 + explicit Box-Muller), so sequences
/// are identical across platforms.
class Rng {
  public:
    explicit Rng(RngStream stream);

    /// Uniform on [0, 1), 53-bit resolution.
    double uniform01();
    /// Uniform on [-1, 1).
    double uniform_pm1();
    /// Standard normal via Box-Muller (second deviate cached).
    double gaussian();
    /// -1 or +1 with equal probability.
    double sign();
    /// Uniform integer in [lo, hi].
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);

  private:
    std::mt19937_64 engine_;
    bool has_cached_ = false;
    double cached_ = 0.0;
};

enum class MultiplierTag {
    Gaussian,
    UniformPm1,
    ToeplitzGaussian,
    CirculantGaussian,
    CirculantSign,
    HouseholderSign,
};

/// Multiplier family; the tag fully determines structure and sampling law.
struct MultiplierKind {
    MultiplierTag tag = MultiplierTag::Gaussian;
    double mu = 0.0;
    double sigma = 1.0;
};

Matrix gaussian_matrix(std::size_t m, std::size_t n, double mu, double sigma, RngStream stream);
Matrix uniform_matrix(std::size_t m, std::size_t n, RngStream stream);

structured::StructuredSpec random_structured(MultiplierKind kind, std::size_t m, std::size_t n,
                                             RngStream stream);

/// I_n - u v^T / (u^T v) with u, v filled with random signs; resampled while
/// u^T v == 0, up to 64 attempts. Not orthogonal in general.
Matrix householder_sign(std::size_t n, RngStream stream);

/// Orthogonal factor of a seeded Gaussian matrix (positive-diagonal QR).
Matrix random_orthogonal(std::size_t n, RngStream stream);

/// A = S diag(sigmas) T^T for random orthogonal S, T. `sigmas` must be
/// non-increasing and positive.
Matrix profile_matrix(std::size_t n, std::span<const double> sigmas, RngStream stream);

/// Same construction with the factors retained (ground truth for singular
/// space and rank experiments).
struct ProfileFactors {
    Matrix A;
    Matrix S;
    Matrix T;
    std::vector<double> sigmas;
};

ProfileFactors profile_matrix_factors(std::size_t n, std::span<const double> sigmas,
                                      RngStream stream);

/// sigma_j = 1/j for j <= rho, 1e-10 beyond: norm 1, condition number 1e10.
std::vector<double> paper_sigma_profile(std::size_t n, std::size_t rho);

/// Well conditioned system whose leading n/2 block is ill conditioned; the
/// exact solution is retained. Accept/reject on cond(A) <= 1e4 and
/// cond(leading block) >= 1e8, up to 8 regenerations.
struct IllBlockSystem {
    Matrix A;
    std::vector<double> b;
    std::vector<double> y_true;
};

IllBlockSystem illblock_system(std::size_t n, RngStream stream);

} // namespace randla::rnd
