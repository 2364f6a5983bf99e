#pragma once

#include <cstdint>
#include <vector>

namespace specpart {

// Column-major dense matrix. Used both for tall eigenvector blocks (n x m,
// m small) and for the small projected matrices inside the solver.
struct Dense {
    std::int64_t rows = 0;
    std::int64_t cols = 0;
    std::vector<double> data; // column-major, data[j*rows + i]

    Dense() = default;
    Dense(std::int64_t r, std::int64_t c)
        : rows(r), cols(c), data(static_cast<std::size_t>(r) * static_cast<std::size_t>(c), 0.0) {}

    double& operator()(std::int64_t i, std::int64_t j) {
        return data[static_cast<std::size_t>(j) * rows + i];
    }
    double operator()(std::int64_t i, std::int64_t j) const {
        return data[static_cast<std::size_t>(j) * rows + i];
    }

    double* col(std::int64_t j) { return data.data() + static_cast<std::size_t>(j) * rows; }
    const double* col(std::int64_t j) const {
        return data.data() + static_cast<std::size_t>(j) * rows;
    }

    static Dense identity(std::int64_t n) {
        Dense I(n, n);
        for (std::int64_t i = 0; i < n; ++i) I(i, i) = 1.0;
        return I;
    }

    // Copy of columns [first, first+count).
    Dense columns(std::int64_t first, std::int64_t count) const;
};

// Eigendecomposition of a small symmetric matrix by cyclic Jacobi rotations.
// Values ascending, eigenvectors as orthonormal columns. Deterministic sweep
// order; intended for projected matrices (m up to a few hundred).
void sym_eig(const Dense& A, std::vector<double>& values, Dense& vectors);

// In-place lower Cholesky A = L L^T. Returns false on a non-positive pivot.
bool cholesky(Dense& A);

// Solve L x = b / L^T x = b with the factor from cholesky(); b overwritten.
void solve_lower(const Dense& L, double* b);
void solve_lower_transposed(const Dense& L, double* b);

} // namespace specpart
