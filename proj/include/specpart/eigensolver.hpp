#pragma once

#include "specpart/dense.hpp"
#include "specpart/laplacian.hpp"
#include "specpart/preconditioners.hpp"

#include <cstdint>
#include <vector>

namespace specpart {

struct SolverConfig {
    int nev = 1;
    double tol = 1e-4;
    int max_iters = 1000;
    std::uint64_t seed = 0;
    bool locking = true;
    bool record_trace = false;
};

struct TraceRecord {
    int iter = 0;
    double min_residual = 0.0;
    double max_residual = 0.0;
    std::vector<double> theta;
};

struct EigenResult {
    std::vector<double> theta;          // Ritz values, ascending
    Dense X;                            // n x nev, B-orthonormal
    int iterations = 0;
    std::vector<double> residual_norms; // final per-column 2-norms
    std::vector<std::uint8_t> converged;
    int breakdown_retries = 0;
    std::vector<TraceRecord> trace;

    bool all_converged() const;
};

// Seeded uniform(-1,1) entries in column-major order; same (n,d,seed) gives
// the same block on every platform.
Dense initial_guess_random(std::int64_t n, int d, std::uint64_t seed);

// Column 0 is all ones. The index space is split into d contiguous blocks,
// the first n mod d blocks one element larger, and columns 1..d-1 indicate
// blocks 0..d-2, so the ones vector is not in their span.
Dense initial_guess_piecewise(std::int64_t n, int d);

struct RayleighRitzResult {
    Dense basis;                   // B-orthonormalized (and possibly rank-repaired) S
    Dense coeffs;                  // coefficients Y in `basis`; Ritz vectors are basis * coeffs
    std::vector<double> theta;     // nev smallest Ritz values, ascending
    std::vector<std::int64_t> kept_columns; // surviving columns of the input S
};

// Projects the pencil onto span(S) and solves the small eigenproblem.
// Throws BreakdownError when rank repair leaves fewer than nev columns.
RayleighRitzResult rayleigh_ritz(const Dense& S, const LinearOperator& A, const LinearOperator* B,
                                 int nev);

// Preconditioned LOBPCG for the nev smallest eigenpairs. X0 must have nev
// columns. Converged columns are soft-locked: kept in the trial basis but
// excluded from the residual, preconditioned and direction blocks.
EigenResult lobpcg(const EigenProblem& problem, const Preconditioner* M, const Dense& X0,
                   const SolverConfig& cfg);

} // namespace specpart
