#include "specpart/kernels.hpp"

#include "specpart/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <vector>

namespace specpart::kernels {

namespace {
// Reduction chunk: partial sums are produced per chunk and combined in chunk
// order, so results do not depend on the thread count.
constexpr std::int64_t kChunk = 4096;
} // namespace

void spmv_block_serial(const SparseMatrix& A, const Dense& X, Dense& Y) {
    if (X.rows != A.ncols) throw DimensionError("spmv_block: X rows != A cols");
    Y.rows = A.nrows;
    Y.cols = X.cols;
    Y.data.assign(static_cast<std::size_t>(A.nrows) * X.cols, 0.0);

    const std::int64_t m = X.cols;
    for (std::int64_t i = 0; i < A.nrows; ++i) {
        for (std::int64_t c = 0; c < m; ++c) {
            const double* xc = X.col(c);
            double acc = 0.0;
            for (std::int64_t k = A.row_offsets[i]; k < A.row_offsets[i + 1]; ++k)
                acc += A.value_at(k) * xc[A.col_indices[k]];
            Y(i, c) = acc;
        }
    }
}

void spmv_block(const SparseMatrix& A, const Dense& X, Dense& Y) {
    if (X.rows != A.ncols) throw DimensionError("spmv_block: X rows != A cols");
    Y.rows = A.nrows;
    Y.cols = X.cols;
    Y.data.assign(static_cast<std::size_t>(A.nrows) * X.cols, 0.0);

    const std::int64_t n = A.nrows;
    const std::int64_t m = X.cols;
    const bool pattern = !A.has_values();

#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) {
        const std::int64_t begin = A.row_offsets[i];
        const std::int64_t end = A.row_offsets[i + 1];
        for (std::int64_t c = 0; c < m; ++c) {
            const double* xc = X.col(c);
            double acc = 0.0;
            if (pattern) {
                for (std::int64_t k = begin; k < end; ++k) acc += xc[A.col_indices[k]];
            } else {
                for (std::int64_t k = begin; k < end; ++k)
                    acc += A.values[k] * xc[A.col_indices[k]];
            }
            Y(i, c) = acc;
        }
    }
}

Dense gram_serial(const Dense& U, const Dense& V) {
    if (U.rows != V.rows) throw DimensionError("gram: row mismatch");
    Dense G(U.cols, V.cols);
    for (std::int64_t j = 0; j < V.cols; ++j) {
        const double* vj = V.col(j);
        for (std::int64_t i = 0; i < U.cols; ++i) {
            const double* ui = U.col(i);
            double s = 0.0;
            for (std::int64_t r = 0; r < U.rows; ++r) s += ui[r] * vj[r];
            G(i, j) = s;
        }
    }
    return G;
}

Dense gram(const Dense& U, const Dense& V) {
    if (U.rows != V.rows) throw DimensionError("gram: row mismatch");
    const std::int64_t n = U.rows;
    const std::int64_t mu = U.cols, mv = V.cols;
    const std::int64_t nchunks = (n + kChunk - 1) / kChunk;
    if (nchunks <= 1) return gram_serial(U, V);

    std::vector<double> partial(static_cast<std::size_t>(nchunks) * mu * mv, 0.0);

#pragma omp parallel for schedule(static)
    for (std::int64_t ch = 0; ch < nchunks; ++ch) {
        const std::int64_t lo = ch * kChunk;
        const std::int64_t hi = std::min(n, lo + kChunk);
        double* p = partial.data() + static_cast<std::size_t>(ch) * mu * mv;
        for (std::int64_t j = 0; j < mv; ++j) {
            const double* vj = V.col(j);
            for (std::int64_t i = 0; i < mu; ++i) {
                const double* ui = U.col(i);
                double s = 0.0;
                for (std::int64_t r = lo; r < hi; ++r) s += ui[r] * vj[r];
                p[j * mu + i] += s;
            }
        }
    }

    Dense G(mu, mv);
    for (std::int64_t ch = 0; ch < nchunks; ++ch) {
        const double* p = partial.data() + static_cast<std::size_t>(ch) * mu * mv;
        for (std::size_t t = 0; t < static_cast<std::size_t>(mu) * mv; ++t) G.data[t] += p[t];
    }
    return G;
}

void mult_serial(const Dense& X, const Dense& C, Dense& Y) {
    if (X.cols != C.rows) throw DimensionError("mult: inner dimension mismatch");
    Y.rows = X.rows;
    Y.cols = C.cols;
    Y.data.assign(static_cast<std::size_t>(X.rows) * C.cols, 0.0);
    for (std::int64_t j = 0; j < C.cols; ++j) {
        double* yj = Y.col(j);
        for (std::int64_t i = 0; i < X.rows; ++i) {
            double s = 0.0;
            for (std::int64_t k = 0; k < X.cols; ++k) s += X(i, k) * C(k, j);
            yj[i] = s;
        }
    }
}

void mult(const Dense& X, const Dense& C, Dense& Y) {
    if (X.cols != C.rows) throw DimensionError("mult: inner dimension mismatch");
    Y.rows = X.rows;
    Y.cols = C.cols;
    Y.data.assign(static_cast<std::size_t>(X.rows) * C.cols, 0.0);
    const std::int64_t n = X.rows, kk = X.cols, m = C.cols;

#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) {
        for (std::int64_t j = 0; j < m; ++j) {
            double s = 0.0;
            for (std::int64_t k = 0; k < kk; ++k) s += X(i, k) * C(k, j);
            Y(i, j) = s;
        }
    }
}

void mult_sub(Dense& Y, const Dense& X, const Dense& C) {
    if (X.cols != C.rows || Y.rows != X.rows || Y.cols != C.cols)
        throw DimensionError("mult_sub: shape mismatch");
    const std::int64_t n = X.rows, kk = X.cols, m = C.cols;

#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) {
        for (std::int64_t j = 0; j < m; ++j) {
            double s = 0.0;
            for (std::int64_t k = 0; k < kk; ++k) s += X(i, k) * C(k, j);
            Y(i, j) -= s;
        }
    }
}

double dot(const double* u, const double* v, std::int64_t n) {
    const std::int64_t nchunks = (n + kChunk - 1) / kChunk;
    if (nchunks <= 1) {
        double s = 0.0;
        for (std::int64_t i = 0; i < n; ++i) s += u[i] * v[i];
        return s;
    }
    std::vector<double> partial(nchunks, 0.0);
#pragma omp parallel for schedule(static)
    for (std::int64_t ch = 0; ch < nchunks; ++ch) {
        const std::int64_t lo = ch * kChunk;
        const std::int64_t hi = std::min(n, lo + kChunk);
        double s = 0.0;
        for (std::int64_t i = lo; i < hi; ++i) s += u[i] * v[i];
        partial[ch] = s;
    }
    double s = 0.0;
    for (double p : partial) s += p;
    return s;
}

double norm2(const double* u, std::int64_t n) { return std::sqrt(dot(u, u, n)); }

void axpy(double alpha, const double* x, double* y, std::int64_t n) {
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void diag_scale(const std::vector<double>& d, const Dense& X, Dense& Y) {
    if (static_cast<std::int64_t>(d.size()) != X.rows) throw DimensionError("diag_scale: size mismatch");
    Y.rows = X.rows;
    Y.cols = X.cols;
    Y.data.resize(X.data.size());
    const std::int64_t n = X.rows, m = X.cols;

#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i)
        for (std::int64_t j = 0; j < m; ++j) Y(i, j) = d[i] * X(i, j);
}

void scale_columns(Dense& X, const std::vector<double>& s) {
    if (static_cast<std::int64_t>(s.size()) != X.cols) throw DimensionError("scale_columns: size mismatch");
    for (std::int64_t j = 0; j < X.cols; ++j) {
        double* xj = X.col(j);
        const double f = s[j];
#pragma omp parallel for schedule(static)
        for (std::int64_t i = 0; i < X.rows; ++i) xj[i] *= f;
    }
}

} // namespace specpart::kernels
