#pragma once

#include "specpart/dense.hpp"
#include "specpart/graph.hpp"
#include "specpart/sparse.hpp"

#include <optional>
#include <vector>

namespace specpart {

// Symmetric sparse operator with a Gershgorin bound on its spectrum.
// The main diagonal is cached for preconditioners and B-inner products.
struct LinearOperator {
    SparseMatrix matrix;
    double spectral_bound = 0.0;
    bool is_diagonal = false;
    std::vector<double> diag; // a_ii per row (0 where absent)

    std::int64_t n() const { return matrix.nrows; }
};

LinearOperator make_operator(SparseMatrix m);

// L_C = D - A: diagonal holds the weighted degree, off-diagonals the negated
// edge costs.
LinearOperator build_combinatorial(const Graph& g);

// L_N = I - D^{-1/2} A D^{-1/2}. Every vertex must have degree >= 1.
LinearOperator build_normalized(const Graph& g);

// Diagonal operator of weighted degrees.
LinearOperator build_degree(const Graph& g);

// Y = op * V, column by column, deterministic accumulation order.
void apply_block(const LinearOperator& op, const Dense& V, Dense& Y);
Dense apply_block(const LinearOperator& op, const Dense& V);

enum class ProblemKind { Combinatorial, Generalized, Normalized };

// Generalized pairs L_C with B = D; the other two are standard problems.
struct EigenProblem {
    ProblemKind kind = ProblemKind::Combinatorial;
    LinearOperator A;
    std::optional<LinearOperator> B;
};

EigenProblem build_problem(const Graph& g, ProblemKind kind);

const char* problem_name(ProblemKind kind);

} // namespace specpart
