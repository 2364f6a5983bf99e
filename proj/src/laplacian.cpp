#include "specpart/laplacian.hpp"

#include "specpart/errors.hpp"
#include "specpart/kernels.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace specpart {

namespace {

double gershgorin_bound(const SparseMatrix& m) {
    double bound = 0.0;
    for (std::int64_t i = 0; i < m.nrows; ++i) {
        double diag = 0.0, off = 0.0;
        for (std::int64_t k = m.row_offsets[i]; k < m.row_offsets[i + 1]; ++k) {
            const double v = m.value_at(k);
            if (m.col_indices[k] == i)
                diag += v;
            else
                off += std::abs(v);
        }
        bound = std::max(bound, diag + off);
    }
    return bound;
}

std::vector<double> extract_diag(const SparseMatrix& m) {
    std::vector<double> d(m.nrows, 0.0);
    for (std::int64_t i = 0; i < m.nrows; ++i)
        for (std::int64_t k = m.row_offsets[i]; k < m.row_offsets[i + 1]; ++k)
            if (m.col_indices[k] == i) d[i] = m.value_at(k);
    return d;
}

} // namespace

LinearOperator make_operator(SparseMatrix m) {
    LinearOperator op;
    op.spectral_bound = gershgorin_bound(m);
    op.diag = extract_diag(m);
    op.is_diagonal = m.nnz() == m.nrows;
    if (op.is_diagonal) {
        for (std::int64_t k = 0; k < m.nnz() && op.is_diagonal; ++k)
            if (m.col_indices[k] != k) op.is_diagonal = false;
    }
    op.matrix = std::move(m);
    return op;
}

LinearOperator build_combinatorial(const Graph& g) {
    if (g.n() == 0) throw std::invalid_argument("build_combinatorial: empty graph");
    const SparseMatrix& adj = g.adjacency;

    SparseMatrix L;
    L.nrows = L.ncols = g.n();
    L.row_offsets.assign(g.n() + 1, 0);
    L.col_indices.reserve(adj.nnz() + g.n());
    L.values.reserve(adj.nnz() + g.n());

    for (std::int64_t i = 0; i < g.n(); ++i) {
        bool diag_placed = false;
        const double deg = g.weighted_degree(i);
        for (std::int64_t k = adj.row_offsets[i]; k < adj.row_offsets[i + 1]; ++k) {
            const std::int32_t j = adj.col_indices[k];
            if (!diag_placed && j > i) {
                L.col_indices.push_back(static_cast<std::int32_t>(i));
                L.values.push_back(deg);
                diag_placed = true;
            }
            L.col_indices.push_back(j);
            L.values.push_back(-adj.value_at(k));
        }
        if (!diag_placed) {
            L.col_indices.push_back(static_cast<std::int32_t>(i));
            L.values.push_back(deg);
        }
        L.row_offsets[i + 1] = static_cast<std::int64_t>(L.col_indices.size());
    }
    return make_operator(std::move(L));
}

LinearOperator build_normalized(const Graph& g) {
    if (g.n() == 0) throw std::invalid_argument("build_normalized: empty graph");

    std::vector<double> inv_sqrt_deg(g.n());
    for (std::int64_t i = 0; i < g.n(); ++i) {
        const double deg = g.weighted_degree(i);
        if (deg <= 0.0)
            throw DegenerateDegreeError("normalized Laplacian requires degree >= 1 at vertex " +
                                        std::to_string(i));
        inv_sqrt_deg[i] = 1.0 / std::sqrt(deg);
    }

    const SparseMatrix& adj = g.adjacency;
    SparseMatrix L;
    L.nrows = L.ncols = g.n();
    L.row_offsets.assign(g.n() + 1, 0);
    L.col_indices.reserve(adj.nnz() + g.n());
    L.values.reserve(adj.nnz() + g.n());

    for (std::int64_t i = 0; i < g.n(); ++i) {
        bool diag_placed = false;
        for (std::int64_t k = adj.row_offsets[i]; k < adj.row_offsets[i + 1]; ++k) {
            const std::int32_t j = adj.col_indices[k];
            if (!diag_placed && j > i) {
                L.col_indices.push_back(static_cast<std::int32_t>(i));
                L.values.push_back(1.0);
                diag_placed = true;
            }
            L.col_indices.push_back(j);
            L.values.push_back(-adj.value_at(k) * inv_sqrt_deg[i] * inv_sqrt_deg[j]);
        }
        if (!diag_placed) {
            L.col_indices.push_back(static_cast<std::int32_t>(i));
            L.values.push_back(1.0);
        }
        L.row_offsets[i + 1] = static_cast<std::int64_t>(L.col_indices.size());
    }
    LinearOperator op = make_operator(std::move(L));
    // the normalized spectrum lies in [0, 2]; Gershgorin can be looser on
    // degree-skewed rows
    op.spectral_bound = std::min(op.spectral_bound, 2.0);
    return op;
}

LinearOperator build_degree(const Graph& g) {
    if (g.n() == 0) throw std::invalid_argument("build_degree: empty graph");

    SparseMatrix D;
    D.nrows = D.ncols = g.n();
    D.row_offsets.resize(g.n() + 1);
    D.col_indices.resize(g.n());
    D.values.resize(g.n());
    for (std::int64_t i = 0; i < g.n(); ++i) {
        D.row_offsets[i] = i;
        D.col_indices[i] = static_cast<std::int32_t>(i);
        D.values[i] = g.weighted_degree(i);
    }
    D.row_offsets[g.n()] = g.n();
    return make_operator(std::move(D));
}

void apply_block(const LinearOperator& op, const Dense& V, Dense& Y) {
    if (V.rows != op.n()) throw DimensionError("apply_block: dimension mismatch");
    if (op.is_diagonal) {
        kernels::diag_scale(op.diag, V, Y);
        return;
    }
    kernels::spmv_block(op.matrix, V, Y);
}

Dense apply_block(const LinearOperator& op, const Dense& V) {
    Dense Y;
    apply_block(op, V, Y);
    return Y;
}

EigenProblem build_problem(const Graph& g, ProblemKind kind) {
    EigenProblem p;
    p.kind = kind;
    switch (kind) {
    case ProblemKind::Combinatorial:
        p.A = build_combinatorial(g);
        break;
    case ProblemKind::Generalized:
        p.A = build_combinatorial(g);
        p.B = build_degree(g);
        for (double d : p.B->diag)
            if (!(d > 0.0))
                throw DegenerateDegreeError("generalized problem requires positive degrees");
        break;
    case ProblemKind::Normalized:
        p.A = build_normalized(g);
        break;
    }
    return p;
}

const char* problem_name(ProblemKind kind) {
    switch (kind) {
    case ProblemKind::Combinatorial: return "combinatorial";
    case ProblemKind::Generalized: return "generalized";
    case ProblemKind::Normalized: return "normalized";
    }
    return "?";
}

} // namespace specpart
