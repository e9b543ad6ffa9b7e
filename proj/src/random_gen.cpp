#include "randla/random_gen.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "randla/dense_core.hpp"

namespace randla::rnd {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

} // namespace

Rng::Rng(RngStream stream) {
    // Mix (seed, stream_id) into a single engine seed through splitmix64 so
    // neighbouring stream ids decorrelate.
    std::uint64_t s = stream.seed;
    std::uint64_t a = splitmix64(s);
    s ^= stream.stream_id * 0xda942042e4dd58b5ULL + 0x2545f4914f6cdd1dULL;
    std::uint64_t b = splitmix64(s);
    engine_.seed(a ^ (b << 1));
    engine_.discard(8);
}

double Rng::uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::uniform_pm1() {
    return 2.0 * uniform01() - 1.0;
}

double Rng::gaussian() {
    if (has_cached_) {
        has_cached_ = false;
        return cached_;
    }
    double u1 = 1.0 - uniform01(); // (0, 1]
    double u2 = uniform01();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 2.0 * std::numbers::pi * u2;
    cached_ = r * std::sin(a);
    has_cached_ = true;
    return r * std::cos(a);
}

double Rng::sign() {
    return (engine_() & 1u) ? 1.0 : -1.0;
}

std::int64_t Rng::uniform_int(std::int64_t lo, std::int64_t hi) {
    if (hi < lo)
        throw InvalidArgument("uniform_int: empty range");
    std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    // Rejection sampling keeps the distribution exactly uniform.
    std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() / span * span;
    std::uint64_t v;
    do {
        v = engine_();
    } while (v >= limit);
    return lo + static_cast<std::int64_t>(v % span);
}

Matrix gaussian_matrix(std::size_t m, std::size_t n, double mu, double sigma, RngStream stream) {
    if (!(sigma > 0.0))
        throw InvalidArgument("gaussian_matrix: sigma must be positive");
    Rng rng(stream);
    Matrix out(m, n);
    for (double& v : out.data())
        v = mu + sigma * rng.gaussian();
    return out;
}

Matrix uniform_matrix(std::size_t m, std::size_t n, RngStream stream) {
    Rng rng(stream);
    Matrix out(m, n);
    for (double& v : out.data())
        v = rng.uniform_pm1();
    return out;
}

structured::StructuredSpec random_structured(MultiplierKind kind, std::size_t m, std::size_t n,
                                             RngStream stream) {
    Rng rng(stream);
    switch (kind.tag) {
    case MultiplierTag::ToeplitzGaussian: {
        std::vector<double> col(m), row(n);
        col[0] = kind.mu + kind.sigma * rng.gaussian();
        row[0] = col[0];
        for (std::size_t i = 1; i < m; ++i)
            col[i] = kind.mu + kind.sigma * rng.gaussian();
        for (std::size_t j = 1; j < n; ++j)
            row[j] = kind.mu + kind.sigma * rng.gaussian();
        return structured::StructuredSpec::toeplitz(std::move(col), std::move(row));
    }
    case MultiplierTag::CirculantGaussian: {
        if (m != n)
            throw DimensionMismatch("random_structured: circulant requires m == n");
        std::vector<double> col(n);
        for (double& v : col)
            v = kind.mu + kind.sigma * rng.gaussian();
        return structured::StructuredSpec::circulant(std::move(col));
    }
    case MultiplierTag::CirculantSign: {
        if (m != n)
            throw DimensionMismatch("random_structured: circulant requires m == n");
        std::vector<double> col(n);
        for (double& v : col)
            v = rng.sign();
        return structured::StructuredSpec::circulant(std::move(col));
    }
    default:
        throw InvalidArgument("random_structured: kind is not structured");
    }
}

Matrix householder_sign(std::size_t n, RngStream stream) {
    Rng rng(stream);
    for (int attempt = 0; attempt < 64; ++attempt) {
        std::vector<double> u(n), v(n);
        for (std::size_t i = 0; i < n; ++i)
            u[i] = rng.sign();
        for (std::size_t i = 0; i < n; ++i)
            v[i] = rng.sign();
        double uv = dot(u, v);
        if (uv == 0.0)
            continue;
        Matrix out = Matrix::identity(n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                out(i, j) -= u[i] * v[j] / uv;
        return out;
    }
    throw Degenerate("householder_sign: u^T v == 0 after 64 resamples");
}

Matrix random_orthogonal(std::size_t n, RngStream stream) {
    if (n == 1) {
        // O(1) is {+1, -1}; the sign is absorbed by the other factors in
        // every construction using this, so pin the normalized representative.
        Matrix one(1, 1);
        one(0, 0) = 1.0;
        return one;
    }
    for (int attempt = 0; attempt < 2; ++attempt) {
        try {
            Matrix g = gaussian_matrix(n, n, 0.0, 1.0,
                                       attempt == 0 ? stream
                                                    : stream.with_stream(stream.stream_id ^ 0x8000000000000000ULL));
            return dense::qr_positive(g).Q;
        } catch (const RankDeficient&) {
            // Probability-zero event; retry once on an advanced stream.
        }
    }
    throw RankDeficient("random_orthogonal: repeated rank-deficient draws");
}

ProfileFactors profile_matrix_factors(std::size_t n, std::span<const double> sigmas,
                                      RngStream stream) {
    if (sigmas.size() != n)
        throw InvalidArgument("profile_matrix: sigma count must equal n");
    for (std::size_t j = 0; j + 1 < n; ++j)
        if (sigmas[j] < sigmas[j + 1])
            throw ProfileNotSorted("profile_matrix: sigmas must be non-increasing");
    for (double s : sigmas)
        if (!(s > 0.0))
            throw InvalidArgument("profile_matrix: sigmas must be positive");
    Matrix s = random_orthogonal(n, stream);
    Matrix t = random_orthogonal(n, stream.with_stream(stream.stream_id ^ 0x4000000000000000ULL));
    // A = S diag(sigmas) T^T
    Matrix a(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) {
            double f = s(i, k) * sigmas[k];
            for (std::size_t j = 0; j < n; ++j)
                a(i, j) += f * t(j, k);
        }
    return ProfileFactors{std::move(a), std::move(s), std::move(t),
                          std::vector<double>(sigmas.begin(), sigmas.end())};
}

Matrix profile_matrix(std::size_t n, std::span<const double> sigmas, RngStream stream) {
    return profile_matrix_factors(n, sigmas, stream).A;
}

std::vector<double> paper_sigma_profile(std::size_t n, std::size_t rho) {
    std::vector<double> s(n, 1e-10);
    for (std::size_t j = 0; j < std::min(rho, n); ++j)
        s[j] = 1.0 / static_cast<double>(j + 1);
    return s;
}

IllBlockSystem illblock_system(std::size_t n, RngStream stream) {
    if (n < 4 || n % 2 != 0)
        throw InvalidArgument("illblock_system: n must be even and >= 4");
    const std::size_t h = n / 2;
    for (std::uint64_t attempt = 0; attempt < 8; ++attempt) {
        RngStream sub = stream.with_stream(stream.stream_id * 16 + attempt);
        // Leading block: flat spectrum with the trailing quarter collapsed
        // below double-precision resolution. The collapse must sit under the
        // rounding noise floor so that plain no-pivot elimination, whose
        // pivots track the block's leading minors, actually loses all digits
        // (growth ~ 1/sigma_min); a milder collapse only yields residuals
        // around eps times the growth factor instead of the intended
        // catastrophic failures.
        std::vector<double> sigmas(h, 1.0);
        std::size_t drop = std::max<std::size_t>(1, h / 4);
        for (std::size_t j = h - drop; j < h; ++j)
            sigmas[j] = 1e-18;
        Matrix lead = profile_matrix(h, sigmas, sub.with_stream(sub.stream_id ^ 0x1000000000000000ULL));
        Matrix rest = uniform_matrix(n, n, sub.with_stream(sub.stream_id ^ 0x2000000000000000ULL));
        Matrix a = rest;
        for (std::size_t i = 0; i < h; ++i)
            for (std::size_t j = 0; j < h; ++j)
                a(i, j) = lead(i, j);
        // Normalize to unit spectral norm; the condition numbers are
        // scale-invariant.
        double na = dense::norm2(a);
        a = a.scale(1.0 / na);
        double kappa_a;
        try {
            kappa_a = dense::cond2(a, 0.0);
        } catch (const ZeroMatrix&) {
            continue;
        }
        double kappa_block = dense::cond2(a.block(0, 0, h, h), 0.0);
        if (kappa_a <= 1e4 && kappa_block >= 1e8) {
            Rng rng(sub.with_stream(sub.stream_id ^ 0x3000000000000000ULL));
            std::vector<double> y(n);
            for (double& v : y)
                v = rng.uniform_pm1();
            std::vector<double> b = a.multiply(y);
            return IllBlockSystem{std::move(a), std::move(b), std::move(y)};
        }
    }
    throw ConstructionFailed("illblock_system: no qualifying matrix in 8 attempts");
}

} // namespace randla::rnd
