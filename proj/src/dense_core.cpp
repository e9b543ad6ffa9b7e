#include "randla/dense_core.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>

namespace randla::dense {

namespace {

using EigenRowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

Eigen::Map<const EigenRowMat> as_eigen(const Matrix& m) {
    return Eigen::Map<const EigenRowMat>(m.data().data(), static_cast<Eigen::Index>(m.rows()),
                                         static_cast<Eigen::Index>(m.cols()));
}

Matrix from_eigen(const EigenRowMat& e) {
    Matrix m(static_cast<std::size_t>(e.rows()), static_cast<std::size_t>(e.cols()));
    Eigen::Map<EigenRowMat>(m.data().data(), e.rows(), e.cols()) = e;
    return m;
}

// Full SVD without the sign normalization applied yet.
void full_svd(const Matrix& a, EigenRowMat& u, Eigen::VectorXd& s, EigenRowMat& v) {
    auto ae = as_eigen(a);
    if (std::min(a.rows(), a.cols()) >= 16) {
        Eigen::BDCSVD<EigenRowMat> dec(ae, Eigen::ComputeFullU | Eigen::ComputeFullV);
        if (dec.info() != Eigen::Success)
            throw NoConvergence("svd: iteration did not converge");
        u = dec.matrixU();
        s = dec.singularValues();
        v = dec.matrixV();
    } else {
        Eigen::JacobiSVD<EigenRowMat> dec(ae, Eigen::ComputeFullU | Eigen::ComputeFullV);
        if (dec.info() != Eigen::Success)
            throw NoConvergence("svd: iteration did not converge");
        u = dec.matrixU();
        s = dec.singularValues();
        v = dec.matrixV();
    }
}

} // namespace

double norm(const Matrix& a, NormKind kind) {
    switch (kind) {
    case NormKind::One: {
        double best = 0.0;
        for (std::size_t j = 0; j < a.cols(); ++j) {
            double s = 0.0;
            for (std::size_t i = 0; i < a.rows(); ++i)
                s += std::abs(a(i, j));
            best = std::max(best, s);
        }
        return best;
    }
    case NormKind::Inf: {
        double best = 0.0;
        for (std::size_t i = 0; i < a.rows(); ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < a.cols(); ++j)
                s += std::abs(a(i, j));
            best = std::max(best, s);
        }
        return best;
    }
    case NormKind::Frobenius: {
        double s = 0.0;
        for (double v : a.data())
            s += v * v;
        return std::sqrt(s);
    }
    case NormKind::Two: {
        EigenRowMat u, v;
        Eigen::VectorXd sv;
        full_svd(a, u, sv, v);
        return sv.size() ? sv[0] : 0.0;
    }
    }
    return 0.0;
}

QrFactors qr_positive(const Matrix& a) {
    const std::size_t m = a.rows(), n = a.cols();
    if (m < n)
        throw InvalidArgument("qr_positive: requires rows >= cols");
    auto ae = as_eigen(a);
    Eigen::HouseholderQR<EigenRowMat> qr(ae);
    EigenRowMat q = qr.householderQ() * EigenRowMat::Identity(static_cast<Eigen::Index>(m),
                                                              static_cast<Eigen::Index>(n));
    EigenRowMat r = qr.matrixQR()
                        .topRows(static_cast<Eigen::Index>(n))
                        .triangularView<Eigen::Upper>();

    // Rank check on the pre-sign-fix diagonal against the spectral norm of R
    // (identical to the spectral norm of A).
    double min_diag = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < r.rows(); ++i)
        min_diag = std::min(min_diag, std::abs(r(i, i)));
    Eigen::JacobiSVD<EigenRowMat> rsvd(r);
    double norm2a = rsvd.singularValues().size() ? rsvd.singularValues()[0] : 0.0;
    if (!(min_diag > 1e-13 * norm2a))
        throw RankDeficient("qr_positive: numerically rank-deficient input");

    for (Eigen::Index i = 0; i < r.rows(); ++i) {
        if (r(i, i) < 0.0) {
            r.row(i) = -r.row(i);
            q.col(i) = -q.col(i);
        }
    }
    return QrFactors{from_eigen(q), from_eigen(r)};
}

SvdFactors svd(const Matrix& a) {
    EigenRowMat u, v;
    Eigen::VectorXd s;
    full_svd(a, u, s, v);
    const std::size_t l = std::min(a.rows(), a.cols());
    // Sign convention: largest-magnitude entry of each left singular vector
    // is positive.
    for (std::size_t j = 0; j < l; ++j) {
        Eigen::Index imax = 0;
        u.col(static_cast<Eigen::Index>(j)).cwiseAbs().maxCoeff(&imax);
        if (u(imax, static_cast<Eigen::Index>(j)) < 0.0) {
            u.col(static_cast<Eigen::Index>(j)) = -u.col(static_cast<Eigen::Index>(j));
            v.col(static_cast<Eigen::Index>(j)) = -v.col(static_cast<Eigen::Index>(j));
        }
    }
    std::vector<double> sigma(l);
    for (std::size_t j = 0; j < l; ++j)
        sigma[j] = s[static_cast<Eigen::Index>(j)];
    return SvdFactors{from_eigen(u), std::move(sigma), from_eigen(v)};
}

Matrix pseudo_inverse(const Matrix& a, double tol) {
    if (tol < 0.0)
        throw InvalidArgument("pseudo_inverse: tol must be >= 0");
    SvdFactors f = svd(a);
    const std::size_t m = a.rows(), n = a.cols(), l = f.sigma.size();
    double cutoff = f.sigma.empty() ? 0.0 : tol * f.sigma[0];
    std::vector<double> inv(l, 0.0);
    for (std::size_t j = 0; j < l; ++j)
        if (f.sigma[j] > cutoff && f.sigma[j] > 0.0)
            inv[j] = 1.0 / f.sigma[j];
    // T * diag(inv) * S^T, n x m
    Matrix out(n, m);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < l; ++k) {
            double t = f.T(i, k) * inv[k];
            if (t == 0.0)
                continue;
            for (std::size_t j = 0; j < m; ++j)
                out(i, j) += t * f.S(j, k);
        }
    return out;
}

std::size_t numerical_rank(const SvdFactors& f, double tol) {
    if (f.sigma.empty() || f.sigma[0] == 0.0)
        return 0;
    std::size_t r = 0;
    for (std::size_t j = 0; j < f.sigma.size(); ++j)
        if (f.sigma[j] >= tol * f.sigma[0])
            r = j + 1;
    return r;
}

std::size_t numerical_rank(const Matrix& a, double tol) {
    if (!(tol > 0.0 && tol < 1.0))
        throw InvalidArgument("numerical_rank: tol must lie in (0, 1)");
    return numerical_rank(svd(a), tol);
}

double cond2(const Matrix& a, double tol) {
    SvdFactors f = svd(a);
    if (f.sigma.empty() || f.sigma[0] == 0.0)
        throw ZeroMatrix("cond2: zero matrix");
    std::size_t rank = numerical_rank(f, tol);
    double smin = f.sigma[rank - 1];
    if (smin == 0.0)
        return std::numeric_limits<double>::infinity();
    return f.sigma[0] / smin;
}

Matrix truncate_svd(const SvdFactors& f, std::size_t rho) {
    const std::size_t m = f.S.rows(), n = f.T.rows(), l = f.sigma.size();
    if (rho > l)
        throw InvalidArgument("truncate_svd: rho exceeds min(m, n)");
    Matrix out(m, n);
    for (std::size_t k = 0; k < rho; ++k) {
        double s = f.sigma[k];
        if (s == 0.0)
            continue;
        for (std::size_t i = 0; i < m; ++i) {
            double t = s * f.S(i, k);
            for (std::size_t j = 0; j < n; ++j)
                out(i, j) += t * f.T(j, k);
        }
    }
    return out;
}

BasisResult leading_basis(const SvdFactors& f, std::size_t rho, Side side) {
    const std::size_t l = f.sigma.size();
    if (rho < 1 || rho > l)
        throw InvalidArgument("leading_basis: rho out of range");
    bool unique = true;
    if (rho < l) {
        double hi = f.sigma[rho - 1], lo = f.sigma[rho];
        if (hi - lo <= 1e-12 * std::max(hi, 1e-300))
            unique = false;
    }
    const Matrix& src = (side == Side::Left) ? f.S : f.T;
    return BasisResult{src.leading_columns(rho), unique};
}

std::vector<double> pivoted_solve(const Matrix& a, std::span<const double> b) {
    if (a.rows() != a.cols() || b.size() != a.rows())
        throw DimensionMismatch("pivoted_solve: shape mismatch");
    auto ae = as_eigen(a);
    Eigen::VectorXd be(static_cast<Eigen::Index>(b.size()));
    for (std::size_t i = 0; i < b.size(); ++i)
        be[static_cast<Eigen::Index>(i)] = b[i];
    Eigen::VectorXd x = ae.partialPivLu().solve(be);
    return std::vector<double>(x.data(), x.data() + x.size());
}

Matrix least_squares(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows())
        throw DimensionMismatch("least_squares: row mismatch");
    auto ae = as_eigen(a);
    auto be = as_eigen(b);
    Eigen::BDCSVD<EigenRowMat> dec(ae, Eigen::ComputeThinU | Eigen::ComputeThinV);
    EigenRowMat x = dec.solve(be);
    return from_eigen(x);
}

Matrix inverse(const Matrix& a) {
    if (a.rows() != a.cols())
        throw DimensionMismatch("inverse: square matrix required");
    auto ae = as_eigen(a);
    EigenRowMat inv = ae.partialPivLu().inverse();
    return from_eigen(inv);
}

} // namespace randla::dense
