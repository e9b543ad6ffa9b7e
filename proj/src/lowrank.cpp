#include "randla/lowrank.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

#include "randla/structured.hpp"

namespace randla::lowrank {

namespace {

Matrix gram(const Matrix& t) {
    return t.transpose().multiply(t);
}

// Orthonormal basis (n x s) of the column span of the leading s singular
// directions of a thin matrix.
Matrix span_basis(const dense::SvdFactors& f, std::size_t s) {
    return f.S.leading_columns(s);
}

// Eigenvalues of a symmetric tridiagonal matrix given by diagonals.
std::vector<double> tridiag_eigenvalues(const std::vector<double>& alpha,
                                        const std::vector<double>& beta) {
    const Eigen::Index k = static_cast<Eigen::Index>(alpha.size());
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(k, k);
    for (Eigen::Index i = 0; i < k; ++i) {
        t(i, i) = alpha[static_cast<std::size_t>(i)];
        if (i + 1 < k) {
            t(i, i + 1) = beta[static_cast<std::size_t>(i)];
            t(i + 1, i) = beta[static_cast<std::size_t>(i)];
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t, Eigen::EigenvaluesOnly);
    std::vector<double> ev(alpha.size());
    for (std::size_t i = 0; i < alpha.size(); ++i)
        ev[i] = es.eigenvalues()[static_cast<Eigen::Index>(i)];
    return ev;
}

} // namespace

Matrix project_onto_basis(const Matrix& a, const Matrix& basis, bool orthonormal,
                          dense::Side side) {
    const std::size_t expected = (side == dense::Side::Right) ? a.cols() : a.rows();
    if (basis.rows() != expected)
        throw DimensionMismatch("project_onto_basis: basis row count mismatch");
    if (!orthonormal) {
        auto f = dense::svd(basis);
        if (f.sigma.back() <= 1e-12 * f.sigma.front())
            throw RankDeficient("project_onto_basis: basis is numerically rank deficient");
    }
    if (side == dense::Side::Right) {
        Matrix at = a.multiply(basis); // m x k
        if (!orthonormal)
            at = at.multiply(dense::inverse(gram(basis)));
        return at.multiply(basis.transpose());
    }
    Matrix sta = basis.transpose().multiply(a); // k x n
    if (!orthonormal)
        sta = dense::inverse(gram(basis)).multiply(sta);
    return basis.multiply(sta);
}

Matrix approx_basis(const Matrix& a, std::size_t rho_plus, rnd::MultiplierKind kind,
                    SpaceSide side, rnd::RngStream stream) {
    const std::size_t m = a.rows(), n = a.cols();
    if (rho_plus < 1 || rho_plus > std::min(m, n))
        throw InvalidArgument("approx_basis: rho_plus out of range");
    const std::size_t mult_rows = (side == SpaceSide::RightSpace) ? m : n;

    switch (kind.tag) {
    case rnd::MultiplierTag::Gaussian:
    case rnd::MultiplierTag::UniformPm1:
    case rnd::MultiplierTag::HouseholderSign: {
        Matrix g = (kind.tag == rnd::MultiplierTag::Gaussian)
                       ? rnd::gaussian_matrix(mult_rows, rho_plus, kind.mu, kind.sigma, stream)
                   : (kind.tag == rnd::MultiplierTag::UniformPm1)
                       ? rnd::uniform_matrix(mult_rows, rho_plus, stream)
                       : rnd::householder_sign(mult_rows, stream).leading_columns(rho_plus);
        return (side == SpaceSide::RightSpace) ? a.transpose().multiply(g) : a.multiply(g);
    }
    case rnd::MultiplierTag::ToeplitzGaussian: {
        auto spec = rnd::random_structured(kind, mult_rows, rho_plus, stream);
        // A^T G = (G^T A)^T; the transposed spec keeps the fast product.
        auto gt = structured::transpose_spec(spec);
        if (side == SpaceSide::RightSpace)
            return structured::multiply_matrix(gt, a).transpose();
        return structured::multiply_matrix(gt, a.transpose()).transpose();
    }
    case rnd::MultiplierTag::CirculantGaussian:
    case rnd::MultiplierTag::CirculantSign: {
        // Square circulant, truncated to the first rho_plus columns after
        // the fast product.
        auto spec = rnd::random_structured(kind, mult_rows, mult_rows, stream);
        auto gt = structured::transpose_spec(spec);
        Matrix full = (side == SpaceSide::RightSpace)
                          ? structured::multiply_matrix(gt, a).transpose()
                          : structured::multiply_matrix(gt, a.transpose()).transpose();
        return full.leading_columns(rho_plus);
    }
    }
    throw InvalidArgument("approx_basis: unknown multiplier kind");
}

LowRankResult proto_lowrank(const Matrix& a, std::size_t rho_plus, double tau, double tau_prime,
                            rnd::MultiplierKind kind, rnd::RngStream stream) {
    if (!(tau_prime > 0.0 && tau_prime < 1.0))
        throw InvalidArgument("proto_lowrank: tau_prime must lie in (0, 1)");
    if (tau > 0.0 && !(tau < 1.0))
        throw InvalidArgument("proto_lowrank: tau must lie in (0, 1) or <= 0 for auto");

    const std::size_t m = a.rows(), n = a.cols();
    auto fa = dense::svd(a);
    const double norm_a = fa.sigma.front();

    LowRankResult result;
    result.basis = Matrix(n, 1);
    result.approx = Matrix(m, n);
    if (norm_a == 0.0) {
        result.ok = true;
        return result;
    }

    for (int attempt = 0; attempt <= 3; ++attempt) {
        rnd::RngStream draw = stream.with_stream(stream.stream_id + 104729ULL * static_cast<std::uint64_t>(attempt));
        Matrix sketch = approx_basis(a, rho_plus, kind, SpaceSide::RightSpace, draw);
        auto fs = dense::svd(sketch);

        double tau_eff = tau;
        if (tau_eff <= 0.0) {
            // Auto rule: widest relative gap within the part of the sketch
            // spectrum below 1e-3 of the top.
            tau_eff = 1e-6;
            double best_gap = 1.0;
            for (std::size_t j = 1; j < fs.sigma.size(); ++j) {
                if (fs.sigma[j] >= 1e-3 * fs.sigma[0])
                    continue;
                double gap = fs.sigma[j] / std::max(fs.sigma[j - 1], 1e-300);
                if (gap < best_gap) {
                    best_gap = gap;
                    tau_eff = std::sqrt(std::max(fs.sigma[j] * fs.sigma[j - 1], 1e-300)) / norm_a;
                }
            }
        }

        // Minimal s with sigma_{s+1}(sketch) <= tau * ||A||.
        std::size_t s = fs.sigma.size();
        while (s > 0 && fs.sigma[s - 1] <= tau_eff * norm_a)
            --s;

        if (s == 0) {
            result.rho = 0;
            result.basis = Matrix(n, 1);
            result.approx = Matrix(m, n);
            result.residual = 1.0;
            result.ok = dense::norm2(a) <= tau_prime * norm_a; // only the zero matrix passes
            if (result.ok)
                result.residual = 1.0;
            continue;
        }

        Matrix basis = span_basis(fs, s);
        Matrix approx = project_onto_basis(a, basis, /*orthonormal=*/true, dense::Side::Right);
        double residual = dense::norm2(a.subtract(approx)) / norm_a;
        result.rho = s;
        result.basis = basis;
        result.approx = approx;
        result.residual = residual;
        result.ok = residual <= tau_prime;
        if (result.ok)
            return result;
    }
    return result;
}

Matrix power_transform(const Matrix& a, unsigned h) {
    if (h == 0)
        return a;
    Matrix aat = a.multiply(a.transpose());
    Matrix b = a;
    for (unsigned i = 0; i < h; ++i)
        b = aat.multiply(b);
    return b;
}

bool sampled_residual_check(const Matrix& a, const Matrix& ahat, std::size_t rho1,
                            std::size_t rho2, double tau, rnd::RngStream stream) {
    if (!a.same_shape(ahat))
        throw ShapeMismatch("sampled_residual_check: shape mismatch");
    if (rho1 < 1 || rho2 < 1)
        throw InvalidArgument("sampled_residual_check: sample widths must be >= 1");
    Matrix k = rnd::gaussian_matrix(a.rows(), rho1, 0.0, 1.0, stream);
    Matrix l = rnd::gaussian_matrix(a.cols(), rho2, 0.0, 1.0,
                                    stream.with_stream(stream.stream_id ^ 0x6000000000000000ULL));
    Matrix mid = k.transpose().multiply(a.subtract(ahat)).multiply(l);
    double lhs = dense::norm2(mid);
    double rhs = tau * dense::norm2(k) * dense::norm2(a) * dense::norm2(l);
    return lhs <= rhs;
}

SvEstimates extremal_sv_estimate(const Matrix& a, SvMethod method, int iters,
                                 rnd::RngStream stream) {
    if (iters < 1)
        throw InvalidArgument("extremal_sv_estimate: iters must be >= 1");
    const std::size_t n = a.cols();
    rnd::Rng rng(stream);

    auto gram_apply = [&a](const std::vector<double>& v) {
        return a.transpose().multiply(a.multiply(v));
    };

    if (method == SvMethod::Power) {
        // Power iteration for the top eigenvalue of A^T A.
        auto top_eig = [&](auto&& apply, double& out) -> bool {
            std::vector<double> v(n);
            for (double& x : v)
                x = rng.gaussian();
            double nv = vector_norm2(v);
            for (double& x : v)
                x /= nv;
            double lambda = 0.0, prev = 0.0;
            for (int it = 0; it < iters; ++it) {
                std::vector<double> w = apply(v);
                double nw = vector_norm2(w);
                if (nw == 0.0) {
                    out = 0.0;
                    return true;
                }
                lambda = dot(v, w);
                for (std::size_t i = 0; i < n; ++i)
                    v[i] = w[i] / nw;
                if (it > 0 && std::abs(lambda - prev) <= 1e-4 * std::max(std::abs(lambda), 1e-300)) {
                    out = lambda;
                    return true;
                }
                prev = lambda;
            }
            out = lambda;
            return false;
        };

        double top = 0.0;
        bool conv1 = top_eig(gram_apply, top);
        top = std::max(top, 0.0);
        if (top == 0.0)
            return SvEstimates{0.0, 0.0};
        double shift = 1.01 * top; // upper bound on sigma_1^2
        auto shifted_apply = [&](const std::vector<double>& v) {
            std::vector<double> w = gram_apply(v);
            for (std::size_t i = 0; i < n; ++i)
                w[i] = shift * v[i] - w[i];
            return w;
        };
        // The quantity of interest is sigma_min = sqrt(shift - lambda), which
        // is tiny against lambda itself, so convergence must be judged on the
        // derived estimate (with an absolute floor at rounding level: once
        // lambda rounds to the shift the estimate is exactly zero).
        std::vector<double> v(n);
        for (double& x : v)
            x = rng.gaussian();
        double nv = vector_norm2(v);
        for (double& x : v)
            x /= nv;
        const double smax = std::sqrt(top);
        double est = smax, prev_est = -1.0;
        bool conv2 = false;
        for (int it = 0; it < iters; ++it) {
            std::vector<double> w = shifted_apply(v);
            double nw = vector_norm2(w);
            if (nw == 0.0)
                break;
            double mu = dot(v, w);
            for (std::size_t i = 0; i < n; ++i)
                v[i] = w[i] / nw;
            est = std::sqrt(std::max(shift - mu, 0.0));
            if (prev_est >= 0.0 &&
                std::abs(est - prev_est) <= 1e-4 * est + 1e-8 * smax) {
                conv2 = true;
                break;
            }
            prev_est = est;
        }
        if (!conv1 || !conv2)
            throw NoConvergence("extremal_sv_estimate: power method did not settle");
        return SvEstimates{smax, est};
    }

    // Lanczos on A^T A with full reorthogonalization; exact once the Krylov
    // space closes, which it does after at most n steps.
    std::vector<std::vector<double>> basis;
    std::vector<double> alpha, beta;
    std::vector<double> q(n);
    for (double& x : q)
        x = rng.gaussian();
    double nq = vector_norm2(q);
    for (double& x : q)
        x /= nq;
    double scale = 0.0;
    double prev_lo = -1.0, prev_hi = -1.0;
    bool settled = false, closed = false;
    const int kmax = std::min<int>(iters, static_cast<int>(n));
    for (int k = 0; k < kmax; ++k) {
        basis.push_back(q);
        std::vector<double> w = gram_apply(q);
        double ak = dot(q, w);
        alpha.push_back(ak);
        for (std::size_t i = 0; i < n; ++i)
            w[i] -= ak * q[i];
        if (k > 0)
            for (std::size_t i = 0; i < n; ++i)
                w[i] -= beta[static_cast<std::size_t>(k - 1)] * basis[static_cast<std::size_t>(k - 1)][i];
        // Full reorthogonalization.
        for (const auto& qq : basis) {
            double c = dot(qq, w);
            for (std::size_t i = 0; i < n; ++i)
                w[i] -= c * qq[i];
        }
        scale = std::max(scale, std::abs(ak));
        double bk = vector_norm2(w);
        auto ev = tridiag_eigenvalues(alpha, beta);
        double lo = *std::min_element(ev.begin(), ev.end());
        double hi = *std::max_element(ev.begin(), ev.end());
        if (prev_hi >= 0.0) {
            bool hi_ok = std::abs(hi - prev_hi) <= 1e-4 * std::max(std::abs(hi), 1e-300);
            bool lo_ok = std::abs(lo - prev_lo) <= 1e-4 * std::max(std::abs(hi), 1e-300);
            settled = hi_ok && lo_ok;
        }
        prev_lo = lo;
        prev_hi = hi;
        if (bk <= 1e-14 * std::max(scale, 1e-300)) {
            closed = true; // invariant subspace: Ritz values are exact
            break;
        }
        beta.push_back(bk);
        for (std::size_t i = 0; i < n; ++i)
            q[i] = w[i] / bk;
    }
    bool exhausted = static_cast<int>(alpha.size()) >= static_cast<int>(n);
    if (!settled && !closed && !exhausted)
        throw NoConvergence("extremal_sv_estimate: lanczos did not settle");
    auto ev = tridiag_eigenvalues(alpha, beta);
    double lo = std::max(*std::min_element(ev.begin(), ev.end()), 0.0);
    double hi = std::max(*std::max_element(ev.begin(), ev.end()), 0.0);
    return SvEstimates{std::sqrt(hi), std::sqrt(lo)};
}

bool cond_probe(const Matrix& b, double kappa_threshold, SvMethod method, int iters,
                rnd::RngStream stream) {
    if (!(kappa_threshold > 1.0))
        throw InvalidArgument("cond_probe: kappa_threshold must exceed 1");
    SvEstimates est = extremal_sv_estimate(b, method, iters, stream);
    if (!(est.sv_min > 1e-14 * est.sv_max) || est.sv_max == 0.0)
        return false;
    return est.sv_max / est.sv_min <= kappa_threshold;
}

NrankResult nrank_search(const Matrix& a, std::size_t rho_minus, std::size_t rho_plus,
                         double kappa_threshold, SearchPolicy policy, rnd::RngStream stream) {
    // Work on the wide side so m >= n.
    const bool transpose = a.rows() < a.cols();
    Matrix work = transpose ? a.transpose() : a;
    const std::size_t m = work.rows(), n = work.cols();
    if (!(rho_minus < rho_plus) || rho_plus > n)
        throw InvalidArgument("nrank_search: need 0 <= rho_minus < rho_plus <= min(m, n)");

    // G is drawn once; candidates only ever truncate its columns.
    Matrix g = rnd::gaussian_matrix(m, rho_plus, 0.0, 1.0, stream);
    const int probe_iters = 4 * static_cast<int>(rho_plus) + 20;

    std::size_t lo = rho_minus, hi = rho_plus;
    std::uint64_t probe_idx = 1;
    while (lo < hi) {
        std::size_t cand;
        if (policy == SearchPolicy::Binary) {
            cand = (lo + hi + 1) / 2;
        } else {
            std::size_t step = std::max<std::size_t>(1, (hi - lo + 3) / 4);
            cand = std::max(lo + 1, hi - step);
        }
        Matrix probe = work.transpose().multiply(g.leading_columns(cand));
        bool pass = cond_probe(probe, kappa_threshold, SvMethod::Lanczos, probe_iters,
                               stream.with_stream(stream.stream_id ^ (0x7000000000000000ULL + probe_idx)));
        ++probe_idx;
        if (pass)
            lo = cand;
        else
            hi = cand - 1;
    }
    NrankResult out;
    out.rho = lo;
    out.basis = (lo > 0) ? work.transpose().multiply(g.leading_columns(lo)) : Matrix(n, 1);
    return out;
}

Matrix nrank_probe_compress(const Matrix& g_rho, rnd::RngStream stream) {
    Matrix f = rnd::gaussian_matrix(g_rho.cols(), g_rho.rows(), 0.0, 1.0, stream);
    return f.multiply(g_rho);
}

} // namespace randla::lowrank
