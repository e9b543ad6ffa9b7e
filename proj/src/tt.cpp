#include "randla/tt.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "randla/dense_core.hpp"

namespace randla::tt {

namespace {

std::size_t product(const std::vector<std::size_t>& v, std::size_t from, std::size_t to) {
    std::size_t p = 1;
    for (std::size_t i = from; i < to; ++i)
        p *= v[i];
    return p;
}

void validate_ranks(const std::vector<std::size_t>& dims, const std::vector<std::size_t>& ranks) {
    if (ranks.size() != dims.size() - 1)
        throw InvalidArgument("tt: need d-1 ranks");
    for (std::size_t r : ranks)
        if (r == 0)
            throw InvalidArgument("tt: ranks must be >= 1");
}

} // namespace

DenseTensor::DenseTensor(std::vector<std::size_t> dims) : dims_(std::move(dims)) {
    if (dims_.size() < 2)
        throw InvalidArgument("DenseTensor: order must be >= 2");
    for (std::size_t d : dims_)
        if (d == 0)
            throw InvalidArgument("DenseTensor: dimensions must be positive");
    data_.assign(product(dims_, 0, dims_.size()), 0.0);
}

DenseTensor::DenseTensor(std::vector<std::size_t> dims, std::vector<double> entries)
    : DenseTensor(std::move(dims)) {
    if (entries.size() != data_.size())
        throw DimensionMismatch("DenseTensor: entry count mismatch");
    data_ = std::move(entries);
    for (double v : data_)
        if (!std::isfinite(v))
            throw InvalidArgument("DenseTensor: non-finite entry");
}

double DenseTensor::frobenius_norm() const {
    double s = 0.0;
    for (double v : data_)
        s += v * v;
    return std::sqrt(s);
}

std::vector<std::size_t> TtTrain::ranks() const {
    std::vector<std::size_t> r;
    for (std::size_t k = 0; k + 1 < cores.size(); ++k)
        r.push_back(cores[k].r_right);
    return r;
}

Matrix unfold(const DenseTensor& t, std::size_t k) {
    const std::size_t d = t.order();
    if (k < 1 || k > d - 1)
        throw IndexOutOfRange("unfold: k must lie in [1, d-1]");
    const std::size_t rows = product(t.dims(), 0, k);
    const std::size_t cols = product(t.dims(), k, d);
    Matrix m(rows, cols);
    // Entries are stored with i_1 fastest, which is exactly the row-fastest
    // layout of the unfolding: linear index p = row + rows * col.
    for (std::size_t p = 0; p < t.size(); ++p)
        m(p % rows, p / rows) = t.data()[p];
    return m;
}

namespace {

// Shared sweep state: the carried matrix of shape (r_{k-1} * n_k) x C with
// row index alpha + r * i_k (alpha fastest) and columns grouping the
// remaining spatial indices, i_{k+1} fastest.
struct Sweep {
    std::vector<std::size_t> dims;
    Matrix carried;

    explicit Sweep(const DenseTensor& t) : dims(t.dims()), carried(unfold(t, 1)) {}

    // Reshape the r x C carry into the next step's (r * n_{k+1}) x C' matrix.
    static Matrix advance(const Matrix& carry, std::size_t n_next) {
        const std::size_t r = carry.rows();
        const std::size_t cols_next = carry.cols() / n_next;
        Matrix m(r * n_next, cols_next);
        for (std::size_t a = 0; a < r; ++a)
            for (std::size_t c = 0; c < carry.cols(); ++c) {
                std::size_t i = c % n_next;
                std::size_t rest = c / n_next;
                m(a + r * i, rest) = carry(a, c);
            }
        return m;
    }
};

TtCore make_core(const Matrix& left, std::size_t r_left, std::size_t n, std::size_t r_right) {
    TtCore core{r_left, n, r_right, std::vector<double>(r_left * n * r_right, 0.0)};
    for (std::size_t b = 0; b < r_right; ++b)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t a = 0; a < r_left; ++a)
                core.at(a, i, b) = left(a + r_left * i, b);
    return core;
}

TtCore make_last_core(const Matrix& carry) {
    TtCore core{carry.rows(), carry.cols(), 1, std::vector<double>(carry.rows() * carry.cols(), 0.0)};
    for (std::size_t i = 0; i < carry.cols(); ++i)
        for (std::size_t a = 0; a < carry.rows(); ++a)
            core.at(a, i, 0) = carry(a, i);
    return core;
}

} // namespace

TtSvdResult tt_svd(const DenseTensor& t, const std::vector<std::size_t>& ranks) {
    validate_ranks(t.dims(), ranks);
    const std::size_t d = t.order();
    Sweep sweep(t);
    Matrix m = sweep.carried;
    std::size_t r_prev = 1;
    TtTrain train;
    std::vector<double> tails;
    for (std::size_t k = 0; k + 1 < d; ++k) {
        const std::size_t n_k = t.dims()[k];
        const std::size_t rk = ranks[k];
        if (rk > std::min(m.rows(), m.cols()))
            throw RankTooLarge("tt_svd: rank exceeds unfolding dimensions");
        auto f = dense::svd(m);
        double tail2 = 0.0;
        for (std::size_t j = rk; j < f.sigma.size(); ++j)
            tail2 += f.sigma[j] * f.sigma[j];
        tails.push_back(std::sqrt(tail2));
        train.cores.push_back(make_core(f.S.leading_columns(rk), r_prev, n_k, rk));
        // Carry Sigma * T^T truncated to rk rows.
        Matrix carry(rk, m.cols());
        for (std::size_t a = 0; a < rk; ++a)
            for (std::size_t c = 0; c < m.cols(); ++c)
                carry(a, c) = f.sigma[a] * f.T(c, a);
        if (k + 2 < d)
            m = Sweep::advance(carry, t.dims()[k + 1]);
        else
            m = carry;
        r_prev = rk;
    }
    train.cores.push_back(make_last_core(m));
    return TtSvdResult{std::move(train), std::move(tails)};
}

TtSvdResult tt_svd(const DenseTensor& t, double tol) {
    if (!(tol >= 0.0))
        throw InvalidArgument("tt_svd: tol must be >= 0");
    const std::size_t d = t.order();
    const double budget = tol * t.frobenius_norm() / std::sqrt(static_cast<double>(d - 1));
    // Tolerance mode runs the same sweep, picking each rank on the fly.
    Sweep sweep(t);
    Matrix m = sweep.carried;
    std::size_t r_prev = 1;
    TtTrain train;
    std::vector<double> tails;
    for (std::size_t k = 0; k + 1 < d; ++k) {
        const std::size_t n_k = t.dims()[k];
        auto f = dense::svd(m);
        // Minimal rank with sigma_{r+1} <= budget.
        std::size_t rk = f.sigma.size();
        while (rk > 1 && f.sigma[rk - 1] <= budget)
            --rk;
        double tail2 = 0.0;
        for (std::size_t j = rk; j < f.sigma.size(); ++j)
            tail2 += f.sigma[j] * f.sigma[j];
        tails.push_back(std::sqrt(tail2));
        train.cores.push_back(make_core(f.S.leading_columns(rk), r_prev, n_k, rk));
        Matrix carry(rk, m.cols());
        for (std::size_t a = 0; a < rk; ++a)
            for (std::size_t c = 0; c < m.cols(); ++c)
                carry(a, c) = f.sigma[a] * f.T(c, a);
        if (k + 2 < d)
            m = Sweep::advance(carry, t.dims()[k + 1]);
        else
            m = carry;
        r_prev = rk;
    }
    train.cores.push_back(make_last_core(m));
    return TtSvdResult{std::move(train), std::move(tails)};
}

TtTrain tt_randomized(const DenseTensor& t, const std::vector<std::size_t>& ranks,
                      std::size_t oversample, rnd::RngStream stream) {
    validate_ranks(t.dims(), ranks);
    const std::size_t d = t.order();
    for (int attempt = 0;; ++attempt) {
        rnd::RngStream draw = stream.with_stream(stream.stream_id + 15485863ULL * static_cast<std::uint64_t>(attempt));
        try {
            Sweep sweep(t);
            Matrix m = sweep.carried;
            std::size_t r_prev = 1;
            TtTrain train;
            std::uint64_t step_id = 1;
            for (std::size_t k = 0; k + 1 < d; ++k) {
                const std::size_t n_k = t.dims()[k];
                const std::size_t rk = ranks[k];
                if (rk > std::min(m.rows(), m.cols()))
                    throw RankTooLarge("tt_randomized: rank exceeds unfolding dimensions");
                const std::size_t width = std::min(m.rows(), std::min(rk + oversample, m.cols()));

                Matrix h = rnd::gaussian_matrix(m.cols(), width, 0.0, 1.0,
                                                draw.with_stream(draw.stream_id + step_id));
                ++step_id;
                Matrix sketch = m.multiply(h);
                // Orthonormal range basis of the sketch; falls back to an
                // SVD cut when the sketch is exactly rank deficient (exact
                // low-rank input with oversampling).
                Matrix q(1, 1);
                try {
                    q = dense::qr_positive(sketch).Q;
                } catch (const RankDeficient&) {
                    auto fs = dense::svd(sketch);
                    std::size_t rank = 0;
                    for (double s : fs.sigma)
                        if (s > 1e-13 * fs.sigma.front())
                            ++rank;
                    if (rank < rk)
                        throw RankDeficientSketch("tt_randomized: sketch lost rank");
                    q = fs.S.leading_columns(rank);
                }
                Matrix z = q.transpose().multiply(m); // width x C, small height
                auto fz = dense::svd(z);
                if (fz.sigma.size() < rk)
                    throw RankDeficientSketch("tt_randomized: projected matrix too thin");
                Matrix left = q.multiply(fz.S.leading_columns(rk));
                train.cores.push_back(make_core(left, r_prev, n_k, rk));
                Matrix carry(rk, m.cols());
                for (std::size_t a = 0; a < rk; ++a)
                    for (std::size_t c = 0; c < m.cols(); ++c)
                        carry(a, c) = fz.sigma[a] * fz.T(c, a);
                if (k + 2 < d)
                    m = Sweep::advance(carry, t.dims()[k + 1]);
                else
                    m = carry;
                r_prev = rk;
            }
            train.cores.push_back(make_last_core(m));
            return train;
        } catch (const RankDeficientSketch&) {
            if (attempt >= 3)
                throw;
        }
    }
}

DenseTensor tt_reconstruct(const TtTrain& train, std::size_t max_entries) {
    if (train.cores.size() < 2)
        throw InvalidArgument("tt_reconstruct: train must have >= 2 cores");
    if (train.cores.front().r_left != 1 || train.cores.back().r_right != 1)
        throw InvalidArgument("tt_reconstruct: boundary ranks must be 1");
    std::vector<std::size_t> dims;
    std::size_t total = 1;
    for (std::size_t k = 0; k < train.cores.size(); ++k) {
        if (k > 0 && train.cores[k].r_left != train.cores[k - 1].r_right)
            throw DimensionMismatch("tt_reconstruct: core ranks do not chain");
        dims.push_back(train.cores[k].n);
        total *= train.cores[k].n;
        if (total > max_entries)
            throw TooLarge("tt_reconstruct: output exceeds memory cap");
    }
    // Left-to-right contraction, keeping i_1 fastest in the row index.
    const TtCore& c0 = train.cores.front();
    Matrix m(c0.n, c0.r_right);
    for (std::size_t i = 0; i < c0.n; ++i)
        for (std::size_t b = 0; b < c0.r_right; ++b)
            m(i, b) = c0.at(0, i, b);
    for (std::size_t k = 1; k < train.cores.size(); ++k) {
        const TtCore& c = train.cores[k];
        Matrix next(m.rows() * c.n, c.r_right);
        for (std::size_t p = 0; p < m.rows(); ++p)
            for (std::size_t i = 0; i < c.n; ++i)
                for (std::size_t b = 0; b < c.r_right; ++b) {
                    double s = 0.0;
                    for (std::size_t a = 0; a < c.r_left; ++a)
                        s += m(p, a) * c.at(a, i, b);
                    next(p + m.rows() * i, b) = s;
                }
        m = std::move(next);
    }
    std::vector<double> data(total);
    for (std::size_t p = 0; p < total; ++p)
        data[p] = m(p, 0);
    return DenseTensor(std::move(dims), std::move(data));
}

double tt_error(const DenseTensor& t, const TtTrain& train) {
    DenseTensor rec = tt_reconstruct(train);
    if (rec.dims() != t.dims())
        throw ShapeMismatch("tt_error: shape mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        double d = t.data()[i] - rec.data()[i];
        s += d * d;
    }
    return std::sqrt(s);
}

void write_tensor_binary(const std::string& path, const DenseTensor& t) {
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw IoError("cannot open for write: " + path);
    std::uint64_t d = t.order();
    f.write(reinterpret_cast<const char*>(&d), sizeof d);
    for (std::size_t dim : t.dims()) {
        std::uint64_t v = dim;
        f.write(reinterpret_cast<const char*>(&v), sizeof v);
    }
    f.write(reinterpret_cast<const char*>(t.data().data()),
            static_cast<std::streamsize>(t.size() * sizeof(double)));
}

DenseTensor read_tensor_binary(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f)
        throw IoError("cannot open for read: " + path);
    std::uint64_t d = 0;
    f.read(reinterpret_cast<char*>(&d), sizeof d);
    if (!f || d < 2 || d > 64)
        throw IoError("tensor binary: bad order");
    std::vector<std::size_t> dims(d);
    for (auto& dim : dims) {
        std::uint64_t v = 0;
        f.read(reinterpret_cast<char*>(&v), sizeof v);
        dim = v;
    }
    DenseTensor t(dims);
    f.read(reinterpret_cast<char*>(t.data().data()),
           static_cast<std::streamsize>(t.size() * sizeof(double)));
    if (!f)
        throw IoError("tensor binary: truncated data");
    return t;
}

void write_tensor_csv(const std::string& path, const DenseTensor& t) {
    std::ofstream f(path);
    if (!f)
        throw IoError("cannot open for write: " + path);
    for (std::size_t k = 0; k < t.order(); ++k)
        f << (k ? "," : "") << t.dims()[k];
    f << "\n" << std::setprecision(17);
    for (double v : t.data())
        f << v << "\n";
}

DenseTensor read_tensor_csv(const std::string& path) {
    std::ifstream f(path);
    if (!f)
        throw IoError("cannot open for read: " + path);
    std::string line;
    if (!std::getline(f, line))
        throw IoError("tensor csv: missing header");
    std::vector<std::size_t> dims;
    std::istringstream hs(line);
    std::string cell;
    while (std::getline(hs, cell, ','))
        dims.push_back(static_cast<std::size_t>(std::stoull(cell)));
    DenseTensor t(dims);
    for (std::size_t i = 0; i < t.size(); ++i)
        if (!(f >> t.data()[i]))
            throw IoError("tensor csv: truncated data");
    return t;
}

TtTrain random_train(const std::vector<std::size_t>& dims, const std::vector<std::size_t>& ranks,
                     rnd::RngStream stream) {
    validate_ranks(dims, ranks);
    rnd::Rng rng(stream);
    TtTrain train;
    std::size_t r_prev = 1;
    for (std::size_t k = 0; k < dims.size(); ++k) {
        std::size_t r_next = (k + 1 < dims.size()) ? ranks[k] : 1;
        TtCore core{r_prev, dims[k], r_next, std::vector<double>(r_prev * dims[k] * r_next)};
        for (double& v : core.data)
            v = rng.gaussian();
        train.cores.push_back(std::move(core));
        r_prev = r_next;
    }
    return train;
}

} // namespace randla::tt
