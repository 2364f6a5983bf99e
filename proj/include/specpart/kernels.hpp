#pragma once

#include "specpart/dense.hpp"
#include "specpart/sparse.hpp"

#include <cstdint>

namespace specpart::kernels {

// The OpenMP kernels below are deterministic for any thread count: either
// each output element is owned by one thread and accumulated in storage
// order, or (for reductions) partial sums are taken over fixed-size row
// chunks and combined serially in chunk order.

// Y = A * X. Row-parallel.
void spmv_block(const SparseMatrix& A, const Dense& X, Dense& Y);
void spmv_block_serial(const SparseMatrix& A, const Dense& X, Dense& Y);

// U^T * V (small result). Chunked deterministic reduction.
Dense gram(const Dense& U, const Dense& V);
Dense gram_serial(const Dense& U, const Dense& V);

// Y = X * C with X tall and C small. Row-parallel.
void mult(const Dense& X, const Dense& C, Dense& Y);
void mult_serial(const Dense& X, const Dense& C, Dense& Y);

// Y -= X * C. Row-parallel.
void mult_sub(Dense& Y, const Dense& X, const Dense& C);

// Deterministic chunked dot product and 2-norm of a column.
double dot(const double* u, const double* v, std::int64_t n);
double norm2(const double* u, std::int64_t n);

// y += alpha * x
void axpy(double alpha, const double* x, double* y, std::int64_t n);

// Y(i,j) = d[i] * X(i,j); diagonal scaling of a block.
void diag_scale(const std::vector<double>& d, const Dense& X, Dense& Y);

// X(:,j) *= s[j]
void scale_columns(Dense& X, const std::vector<double>& s);

} // namespace specpart::kernels
