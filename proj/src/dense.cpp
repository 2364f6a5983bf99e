#include "specpart/dense.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numeric>
#include <stdexcept>

namespace specpart {

Dense Dense::columns(std::int64_t first, std::int64_t count) const {
    Dense out(rows, count);
    std::memcpy(out.data.data(), col(first), sizeof(double) * static_cast<std::size_t>(rows) * count);
    return out;
}

namespace {

double off_diagonal_norm(const Dense& M) {
    double s = 0.0;
    for (std::int64_t j = 0; j < M.cols; ++j)
        for (std::int64_t i = 0; i < M.rows; ++i)
            if (i != j) s += M(i, j) * M(i, j);
    return std::sqrt(s);
}

} // namespace

void sym_eig(const Dense& A, std::vector<double>& values, Dense& vectors) {
    const std::int64_t m = A.rows;
    if (A.cols != m) throw std::logic_error("sym_eig: matrix not square");

    Dense M = A;
    Dense V = Dense::identity(m);

    double scale = 0.0;
    for (double x : M.data) scale = std::max(scale, std::abs(x));
    const double stop = (scale == 0.0) ? 0.0 : 1e-15 * scale * static_cast<double>(m);

    const int max_sweeps = 64;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        if (off_diagonal_norm(M) <= stop) break;
        for (std::int64_t p = 0; p < m - 1; ++p) {
            for (std::int64_t q = p + 1; q < m; ++q) {
                const double apq = M(p, q);
                if (std::abs(apq) <= stop / (static_cast<double>(m) * m + 1.0)) continue;

                const double tau = (M(q, q) - M(p, p)) / (2.0 * apq);
                const double t = (tau >= 0.0) ? 1.0 / (tau + std::sqrt(1.0 + tau * tau))
                                              : 1.0 / (tau - std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;

                for (std::int64_t k = 0; k < m; ++k) {
                    const double mkp = M(k, p), mkq = M(k, q);
                    M(k, p) = c * mkp - s * mkq;
                    M(k, q) = s * mkp + c * mkq;
                }
                for (std::int64_t k = 0; k < m; ++k) {
                    const double mpk = M(p, k), mqk = M(q, k);
                    M(p, k) = c * mpk - s * mqk;
                    M(q, k) = s * mpk + c * mqk;
                }
                for (std::int64_t k = 0; k < m; ++k) {
                    const double vkp = V(k, p), vkq = V(k, q);
                    V(k, p) = c * vkp - s * vkq;
                    V(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }

    std::vector<std::int64_t> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::int64_t i, std::int64_t j) { return M(i, i) < M(j, j); });

    values.resize(m);
    vectors = Dense(m, m);
    for (std::int64_t j = 0; j < m; ++j) {
        values[j] = M(order[j], order[j]);
        for (std::int64_t i = 0; i < m; ++i) vectors(i, j) = V(i, order[j]);
    }
}

bool cholesky(Dense& A) {
    const std::int64_t n = A.rows;
    if (A.cols != n) throw std::logic_error("cholesky: matrix not square");

    for (std::int64_t j = 0; j < n; ++j) {
        double d = A(j, j);
        for (std::int64_t k = 0; k < j; ++k) d -= A(j, k) * A(j, k);
        if (!(d > 0.0)) return false;
        const double ljj = std::sqrt(d);
        A(j, j) = ljj;
        for (std::int64_t i = j + 1; i < n; ++i) {
            double s = A(i, j);
            for (std::int64_t k = 0; k < j; ++k) s -= A(i, k) * A(j, k);
            A(i, j) = s / ljj;
        }
        for (std::int64_t i = 0; i < j; ++i) A(i, j) = 0.0; // keep the factor clean
    }
    return true;
}

void solve_lower(const Dense& L, double* b) {
    const std::int64_t n = L.rows;
    for (std::int64_t i = 0; i < n; ++i) {
        double s = b[i];
        for (std::int64_t k = 0; k < i; ++k) s -= L(i, k) * b[k];
        b[i] = s / L(i, i);
    }
}

void solve_lower_transposed(const Dense& L, double* b) {
    const std::int64_t n = L.rows;
    for (std::int64_t i = n - 1; i >= 0; --i) {
        double s = b[i];
        for (std::int64_t k = i + 1; k < n; ++k) s -= L(k, i) * b[k];
        b[i] = s / L(i, i);
    }
}

} // namespace specpart
