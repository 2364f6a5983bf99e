#include "specpart/preconditioners.hpp"

#include "specpart/errors.hpp"
#include "specpart/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <random>
#include <vector>

namespace specpart {

const char* precond_name(PrecondKind kind) {
    switch (kind) {
    case PrecondKind::Jacobi: return "jacobi";
    case PrecondKind::Polynomial: return "polynomial";
    case PrecondKind::Amg: return "amg";
    }
    return "?";
}

AmgConfig AmgConfig::regular_defaults() {
    AmgConfig c;
    c.smoothing = AggregationMode::Smoothed;
    c.drop_tol = 0.0;
    c.max_levels = 20;
    c.coarse_solver = CoarseSolverKind::Direct;
    return c;
}

AmgConfig AmgConfig::irregular_defaults() {
    AmgConfig c;
    c.smoothing = AggregationMode::Plain;
    c.drop_tol = 0.4;
    c.max_levels = 5;
    c.coarse_solver = CoarseSolverKind::Chebyshev;
    return c;
}

namespace {

std::vector<double> inverse_diagonal(const LinearOperator& A) {
    std::vector<double> inv(A.n());
    for (std::int64_t i = 0; i < A.n(); ++i)
        inv[i] = std::abs(A.diag[i]) < 1e-300 ? 1.0 : 1.0 / A.diag[i];
    return inv;
}

// ---------------------------------------------------------------------------
// Jacobi

class JacobiPreconditioner final : public Preconditioner {
public:
    explicit JacobiPreconditioner(const LinearOperator& A) : inv_diag_(inverse_diagonal(A)) {}

    PrecondKind kind() const override { return PrecondKind::Jacobi; }

    void apply(const Dense& R, Dense& H) const override {
        if (R.rows != static_cast<std::int64_t>(inv_diag_.size()))
            throw DimensionError("jacobi apply: shape mismatch");
        kernels::diag_scale(inv_diag_, R, H);
    }

private:
    std::vector<double> inv_diag_;
};

// ---------------------------------------------------------------------------
// Chebyshev iteration (shared by the AMG smoother/coarse solver and the
// Chebyshev polynomial variant)

struct ChebyshevOp {
    const LinearOperator* A = nullptr;
    const std::vector<double>* inv_diag = nullptr;
    double low = 0.0;
    double high = 0.0;
    int degree = 0;
};

std::vector<double> seeded_vector(std::int64_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<double> v(n);
    for (double& x : v) x = 2.0 * (static_cast<double>(rng() >> 11) * 0x1.0p-53) - 1.0;
    return v;
}

// Power iteration estimate of lambda_max(D^{-1} A).
double estimate_lambda_max(const LinearOperator& A, const std::vector<double>& inv_diag, int iters,
                           std::uint64_t seed) {
    const std::int64_t n = A.n();
    if (n == 1) return 1.0;

    Dense v(n, 1);
    {
        std::vector<double> r = seeded_vector(n, seed);
        std::copy(r.begin(), r.end(), v.data.begin());
    }
    double lambda = 1.0;
    Dense w;
    for (int it = 0; it < iters; ++it) {
        apply_block(A, v, w);
        for (std::int64_t i = 0; i < n; ++i) w(i, 0) *= inv_diag[i];
        const double nrm = kernels::norm2(w.col(0), n);
        if (nrm == 0.0) return 1.0;
        lambda = nrm;
        for (std::int64_t i = 0; i < n; ++i) v(i, 0) = w(i, 0) / nrm;
    }
    return lambda;
}

// Z := p(A) Rhs with the standard three-term Chebyshev recurrence on the
// interval [low, high], diagonally preconditioned; Z starts from zero.
void chebyshev_solve(const ChebyshevOp& op, const Dense& Rhs, Dense& Z) {
    const std::int64_t n = Rhs.rows, m = Rhs.cols;
    const double theta = 0.5 * (op.high + op.low);
    const double delta = 0.5 * (op.high - op.low);
    const double sigma1 = theta / delta;
    const std::vector<double>& inv_diag = *op.inv_diag;

    Z.rows = n;
    Z.cols = m;
    Z.data.assign(static_cast<std::size_t>(n) * m, 0.0);

    Dense dir(n, m);
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i)
        for (std::int64_t j = 0; j < m; ++j) dir(i, j) = inv_diag[i] * Rhs(i, j) / theta;

#pragma omp parallel for schedule(static)
    for (std::int64_t t = 0; t < static_cast<std::int64_t>(Z.data.size()); ++t)
        Z.data[t] += dir.data[t];

    double rho_prev = 1.0 / sigma1;
    Dense AZ, Rcur(n, m);
    for (int it = 1; it < op.degree; ++it) {
        apply_block(*op.A, Z, AZ);
#pragma omp parallel for schedule(static)
        for (std::int64_t i = 0; i < n; ++i)
            for (std::int64_t j = 0; j < m; ++j) Rcur(i, j) = Rhs(i, j) - AZ(i, j);

        const double rho = 1.0 / (2.0 * sigma1 - rho_prev);
        const double c1 = rho * rho_prev;
        const double c2 = 2.0 * rho / delta;
#pragma omp parallel for schedule(static)
        for (std::int64_t i = 0; i < n; ++i)
            for (std::int64_t j = 0; j < m; ++j)
                dir(i, j) = c1 * dir(i, j) + c2 * inv_diag[i] * Rcur(i, j);

#pragma omp parallel for schedule(static)
        for (std::int64_t t = 0; t < static_cast<std::int64_t>(Z.data.size()); ++t)
            Z.data[t] += dir.data[t];
        rho_prev = rho;
    }
}

// ---------------------------------------------------------------------------
// GMRES polynomial

class GmresPolyPreconditioner final : public PolynomialPreconditioner {
public:
    GmresPolyPreconditioner(LinearOperator A, int requested, std::vector<double> roots)
        : A_(std::move(A)), requested_(requested), roots_(std::move(roots)) {}

    PrecondKind kind() const override { return PrecondKind::Polynomial; }
    int requested_degree() const override { return requested_; }
    int achieved_degree() const override { return static_cast<int>(roots_.size()); }
    bool truncated() const override { return achieved_degree() < requested_; }

    void apply(const Dense& R, Dense& H) const override {
        if (R.rows != A_.n()) throw DimensionError("polynomial apply: shape mismatch");
        const std::int64_t n = R.rows, m = R.cols;
        H.rows = n;
        H.cols = m;
        H.data.assign(static_cast<std::size_t>(n) * m, 0.0);

        Dense prod = R;
        Dense AP;
        const int k = achieved_degree();
        for (int i = 0; i < k; ++i) {
            const double inv_root = 1.0 / roots_[i];
#pragma omp parallel for schedule(static)
            for (std::int64_t t = 0; t < static_cast<std::int64_t>(H.data.size()); ++t)
                H.data[t] += inv_root * prod.data[t];
            if (i + 1 < k) {
                apply_block(A_, prod, AP);
#pragma omp parallel for schedule(static)
                for (std::int64_t t = 0; t < static_cast<std::int64_t>(prod.data.size()); ++t)
                    prod.data[t] -= inv_root * AP.data[t];
            }
        }
    }

private:
    LinearOperator A_;
    int requested_;
    std::vector<double> roots_; // harmonic Ritz values in modified Leja order
};

// Chebyshev fallback variant behind the same interface.
class ChebyshevPolyPreconditioner final : public PolynomialPreconditioner {
public:
    ChebyshevPolyPreconditioner(LinearOperator A, const PolyConfig& cfg)
        : A_(std::move(A)), inv_diag_(inverse_diagonal(A_)), degree_(cfg.degree) {
        const double lambda = estimate_lambda_max(A_, inv_diag_, 10, cfg.seed ^ 0x9e3779b97f4a7c15ULL);
        low_ = lambda / 7.0;
        high_ = 1.1 * lambda;
    }

    PrecondKind kind() const override { return PrecondKind::Polynomial; }
    int requested_degree() const override { return degree_; }
    int achieved_degree() const override { return degree_; }
    bool truncated() const override { return false; }

    void apply(const Dense& R, Dense& H) const override {
        if (R.rows != A_.n()) throw DimensionError("polynomial apply: shape mismatch");
        ChebyshevOp op{&A_, &inv_diag_, low_, high_, degree_};
        chebyshev_solve(op, R, H);
    }

private:
    LinearOperator A_;
    std::vector<double> inv_diag_;
    int degree_;
    double low_ = 0.0, high_ = 0.0;
};

// Harmonic Ritz values of A over the Krylov space of the Arnoldi factors:
// eigenvalues of the pencil (Hk^T Hk + beta^2 e_k e_k^T, Hk), reduced to a
// symmetric problem through a Cholesky factor of the symmetrized Hk.
std::vector<double> harmonic_ritz_values(const Dense& Hk, double beta) {
    const std::int64_t k = Hk.rows;

    Dense C(k, k);
    for (std::int64_t i = 0; i < k; ++i)
        for (std::int64_t j = 0; j < k; ++j) {
            double s = 0.0;
            for (std::int64_t l = 0; l < k; ++l) s += Hk(l, i) * Hk(l, j);
            C(i, j) = s;
        }
    C(k - 1, k - 1) += beta * beta;

    Dense T(k, k);
    for (std::int64_t i = 0; i < k; ++i)
        for (std::int64_t j = 0; j < k; ++j) T(i, j) = 0.5 * (Hk(i, j) + Hk(j, i));

    double trace = 0.0;
    for (std::int64_t i = 0; i < k; ++i) trace += T(i, i);
    Dense L = T;
    double shift = 0.0;
    while (!cholesky(L)) {
        shift = shift == 0.0 ? 1e-14 * std::max(trace, 1.0) : shift * 100.0;
        L = T;
        for (std::int64_t i = 0; i < k; ++i) L(i, i) += shift;
        if (shift > 1.0) throw std::runtime_error("harmonic Ritz reduction failed");
    }

    // W = L^{-1} C L^{-T}
    Dense W = C;
    for (std::int64_t j = 0; j < k; ++j) solve_lower(L, W.col(j));
    for (std::int64_t i = 0; i < k; ++i) { // rows: solve on W^T columns
        std::vector<double> row(k);
        for (std::int64_t j = 0; j < k; ++j) row[j] = W(i, j);
        solve_lower(L, row.data());
        for (std::int64_t j = 0; j < k; ++j) W(i, j) = row[j];
    }

    std::vector<double> values;
    Dense vectors;
    sym_eig(W, values, vectors);
    return values;
}

// Orders roots so that each prefix is well conditioned for the product-form
// application: start from the largest magnitude, then repeatedly take the
// root maximizing the product of distances to those already chosen.
std::vector<double> leja_order(std::vector<double> roots) {
    const std::size_t k = roots.size();
    std::vector<double> ordered;
    ordered.reserve(k);
    std::vector<bool> used(k, false);

    std::size_t first = 0;
    for (std::size_t i = 1; i < k; ++i)
        if (std::abs(roots[i]) > std::abs(roots[first])) first = i;
    ordered.push_back(roots[first]);
    used[first] = true;

    while (ordered.size() < k) {
        std::size_t best = k;
        double best_score = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < k; ++i) {
            if (used[i]) continue;
            double score = 0.0;
            for (double r : ordered)
                score += std::log(std::max(std::abs(roots[i] - r), 1e-300));
            if (score > best_score) {
                best_score = score;
                best = i;
            }
        }
        ordered.push_back(roots[best]);
        used[best] = true;
    }
    return ordered;
}

} // namespace

std::unique_ptr<Preconditioner> jacobi_build(const LinearOperator& A) {
    return std::make_unique<JacobiPreconditioner>(A);
}

std::unique_ptr<PolynomialPreconditioner> polynomial_build(const LinearOperator& A,
                                                           const PolyConfig& cfg) {
    if (cfg.degree < 1) throw InfeasibleError("polynomial_build: degree < 1");
    if (cfg.variant == PolyVariant::Chebyshev)
        return std::make_unique<ChebyshevPolyPreconditioner>(A, cfg);

    const std::int64_t n = A.n();
    const int k_req = std::min<std::int64_t>(cfg.degree, n);

    // Seed vector orthogonal to the constant vector, so the Laplacian kernel
    // does not leak into the Krylov space.
    std::vector<double> v0 = seeded_vector(n, cfg.seed);
    {
        double mean = 0.0;
        for (double x : v0) mean += x;
        mean /= static_cast<double>(n);
        for (double& x : v0) x -= mean;
        const double nrm = kernels::norm2(v0.data(), n);
        if (nrm > 0.0)
            for (double& x : v0) x /= nrm;
        else
            v0.assign(n, 0.0), v0[0] = 1.0;
    }

    // Arnoldi with two-pass modified Gram-Schmidt.
    Dense V(n, k_req + 1);
    std::memcpy(V.col(0), v0.data(), sizeof(double) * n);
    Dense Hess(k_req + 1, k_req);
    int k_got = 0;
    double beta = 0.0;
    const double tiny = 1e-13 * (A.spectral_bound > 0.0 ? A.spectral_bound : 1.0);

    Dense w(n, 1);
    for (int j = 0; j < k_req; ++j) {
        {
            Dense vj(n, 1);
            std::memcpy(vj.col(0), V.col(j), sizeof(double) * n);
            apply_block(A, vj, w);
        }
        for (int pass = 0; pass < 2; ++pass) {
            for (int i = 0; i <= j; ++i) {
                const double h = kernels::dot(V.col(i), w.col(0), n);
                kernels::axpy(-h, V.col(i), w.col(0), n);
                Hess(i, j) += h;
            }
        }
        const double nrm = kernels::norm2(w.col(0), n);
        k_got = j + 1;
        if (nrm <= tiny) {
            beta = 0.0; // invariant subspace reached; polynomial truncates here
            break;
        }
        Hess(j + 1, j) = nrm;
        beta = nrm;
        double* next = V.col(j + 1);
#pragma omp parallel for schedule(static)
        for (std::int64_t i = 0; i < n; ++i) next[i] = w(i, 0) / nrm;
    }

    Dense Hk(k_got, k_got);
    for (int i = 0; i < k_got; ++i)
        for (int j = 0; j < k_got; ++j) Hk(i, j) = Hess(i, j);

    std::vector<double> roots = harmonic_ritz_values(Hk, k_got == k_req ? beta : 0.0);
    roots = leja_order(std::move(roots));

    return std::make_unique<GmresPolyPreconditioner>(A, cfg.degree, std::move(roots));
}

// ---------------------------------------------------------------------------
// Aggregation AMG

namespace {

// Strength-of-connection pattern: keep (i,j), i != j, with
// |a_ij| >= drop_tol * sqrt(|a_ii a_jj|).
SparseMatrix strength_graph(const LinearOperator& A, double drop_tol) {
    const SparseMatrix& m = A.matrix;
    SparseMatrix s;
    s.nrows = m.nrows;
    s.ncols = m.ncols;
    s.row_offsets.assign(m.nrows + 1, 0);

    for (std::int64_t i = 0; i < m.nrows; ++i) {
        for (std::int64_t k = m.row_offsets[i]; k < m.row_offsets[i + 1]; ++k) {
            const std::int32_t j = m.col_indices[k];
            if (j == i) continue;
            const double threshold =
                drop_tol * std::sqrt(std::abs(A.diag[i] * A.diag[j]));
            if (std::abs(m.value_at(k)) >= threshold) s.col_indices.push_back(j);
        }
        s.row_offsets[i + 1] = static_cast<std::int64_t>(s.col_indices.size());
    }
    return s;
}

// Greedy aggregation: first pass picks roots (vertices none of whose strong
// neighbors are aggregated) in ascending id order and absorbs their strong
// neighbors; second pass joins leftovers to an adjacent aggregate; isolated
// leftovers become singletons.
std::vector<std::int64_t> aggregate(const SparseMatrix& s, std::int64_t& num_aggregates) {
    const std::int64_t n = s.nrows;
    std::vector<std::int64_t> agg(n, -1);
    std::int64_t next = 0;

    for (std::int64_t i = 0; i < n; ++i) {
        if (agg[i] != -1) continue;
        bool free_neighborhood = true;
        for (std::int64_t k = s.row_offsets[i]; k < s.row_offsets[i + 1] && free_neighborhood; ++k)
            if (agg[s.col_indices[k]] != -1) free_neighborhood = false;
        if (!free_neighborhood) continue;
        agg[i] = next;
        for (std::int64_t k = s.row_offsets[i]; k < s.row_offsets[i + 1]; ++k)
            agg[s.col_indices[k]] = next;
        ++next;
    }

    for (std::int64_t i = 0; i < n; ++i) {
        if (agg[i] != -1) continue;
        for (std::int64_t k = s.row_offsets[i]; k < s.row_offsets[i + 1]; ++k) {
            if (agg[s.col_indices[k]] != -1) {
                agg[i] = agg[s.col_indices[k]];
                break;
            }
        }
    }

    for (std::int64_t i = 0; i < n; ++i)
        if (agg[i] == -1) agg[i] = next++;

    num_aggregates = next;
    return agg;
}

// Piecewise constant tentative prolongator with unit-norm columns.
SparseMatrix tentative_prolongator(const std::vector<std::int64_t>& agg, std::int64_t num_agg) {
    const std::int64_t n = static_cast<std::int64_t>(agg.size());
    std::vector<std::int64_t> count(num_agg, 0);
    for (std::int64_t i = 0; i < n; ++i) ++count[agg[i]];

    SparseMatrix P;
    P.nrows = n;
    P.ncols = num_agg;
    P.row_offsets.resize(n + 1);
    P.col_indices.resize(n);
    P.values.resize(n);
    for (std::int64_t i = 0; i < n; ++i) {
        P.row_offsets[i] = i;
        P.col_indices[i] = static_cast<std::int32_t>(agg[i]);
        P.values[i] = 1.0 / std::sqrt(static_cast<double>(count[agg[i]]));
    }
    P.row_offsets[n] = n;
    return P;
}

// Row-wise sparse product C = A * B with sorted output columns.
SparseMatrix spgemm(const SparseMatrix& A, const SparseMatrix& B) {
    SparseMatrix C;
    C.nrows = A.nrows;
    C.ncols = B.ncols;
    C.row_offsets.assign(A.nrows + 1, 0);

    std::vector<double> work(B.ncols, 0.0);
    std::vector<std::int64_t> marker(B.ncols, -1);
    std::vector<std::int32_t> touched;

    for (std::int64_t i = 0; i < A.nrows; ++i) {
        touched.clear();
        for (std::int64_t ka = A.row_offsets[i]; ka < A.row_offsets[i + 1]; ++ka) {
            const std::int32_t k = A.col_indices[ka];
            const double av = A.value_at(ka);
            for (std::int64_t kb = B.row_offsets[k]; kb < B.row_offsets[k + 1]; ++kb) {
                const std::int32_t j = B.col_indices[kb];
                if (marker[j] != i) {
                    marker[j] = i;
                    work[j] = 0.0;
                    touched.push_back(j);
                }
                work[j] += av * B.value_at(kb);
            }
        }
        std::sort(touched.begin(), touched.end());
        for (std::int32_t j : touched) {
            C.col_indices.push_back(j);
            C.values.push_back(work[j]);
        }
        C.row_offsets[i + 1] = static_cast<std::int64_t>(C.col_indices.size());
    }
    return C;
}

// Galerkin product for the piecewise-constant prolongator, computed as the
// aggregate-bucketed sum of fine entries scaled by 1/sqrt(|I| |J|). The
// bucket sums accumulate in (row, column) order of the fine matrix.
SparseMatrix plain_galerkin(const SparseMatrix& A, const std::vector<std::int64_t>& agg,
                            std::int64_t num_agg) {
    std::vector<double> sqrt_count(num_agg, 0.0);
    for (std::int64_t v : agg) sqrt_count[v] += 1.0;
    for (double& c : sqrt_count) c = std::sqrt(c);

    std::vector<std::vector<std::int64_t>> members(num_agg);
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(agg.size()); ++i)
        members[agg[i]].push_back(i); // ascending by construction

    SparseMatrix C;
    C.nrows = num_agg;
    C.ncols = num_agg;
    C.row_offsets.assign(num_agg + 1, 0);

    std::vector<double> work(num_agg, 0.0);
    std::vector<std::int64_t> marker(num_agg, -1);
    std::vector<std::int32_t> touched;

    for (std::int64_t I = 0; I < num_agg; ++I) {
        touched.clear();
        for (std::int64_t k : members[I]) {
            for (std::int64_t kk = A.row_offsets[k]; kk < A.row_offsets[k + 1]; ++kk) {
                const std::int64_t J = agg[A.col_indices[kk]];
                if (marker[J] != I) {
                    marker[J] = I;
                    work[J] = 0.0;
                    touched.push_back(static_cast<std::int32_t>(J));
                }
                work[J] += A.value_at(kk);
            }
        }
        std::sort(touched.begin(), touched.end());
        for (std::int32_t J : touched) {
            C.col_indices.push_back(J);
            C.values.push_back(work[J] / sqrt_count[I] / sqrt_count[J]);
        }
        C.row_offsets[I + 1] = static_cast<std::int64_t>(C.col_indices.size());
    }
    return C;
}

class AmgPreconditionerImpl final : public AmgPreconditioner {
public:
    AmgPreconditionerImpl(const LinearOperator& A, const AmgConfig& cfg) : cfg_(cfg) {
        build(A);
    }

    PrecondKind kind() const override { return PrecondKind::Amg; }
    const AmgHierarchy& hierarchy() const override { return hier_; }

    void apply(const Dense& R, Dense& H) const override {
        if (R.rows != hier_.levels.front().A.n())
            throw DimensionError("amg apply: shape mismatch");
        vcycle(0, R, H);
    }

private:
    void build(const LinearOperator& A_fine) {
        hier_.levels.push_back({A_fine, {}, {}, {}, inverse_diagonal(A_fine)});

        while (static_cast<int>(hier_.levels.size()) < cfg_.max_levels &&
               hier_.levels.back().A.n() > cfg_.coarse_size_threshold) {
            AmgLevel& fine = hier_.levels.back();
            const SparseMatrix strength = strength_graph(fine.A, cfg_.drop_tol);

            std::int64_t num_agg = 0;
            const std::vector<std::int64_t> agg = aggregate(strength, num_agg);
            if (num_agg >= fine.A.n()) {
                hier_.stagnated = true;
                break;
            }

            SparseMatrix coarse_matrix;
            if (cfg_.smoothing == AggregationMode::Plain) {
                fine.P = tentative_prolongator(agg, num_agg);
                coarse_matrix = plain_galerkin(fine.A.matrix, agg, num_agg);
            } else {
                // P = (I - omega D^{-1} A) P_tent
                const SparseMatrix P_tent = tentative_prolongator(agg, num_agg);
                const double lambda =
                    estimate_lambda_max(fine.A, fine.inv_diag, cfg_.power_iters_setup,
                                        cfg_.seed ^ (0xabcdefULL + hier_.levels.size()));
                const double omega = 4.0 / (3.0 * std::max(lambda, 1e-30));

                SparseMatrix AP = spgemm(fine.A.matrix, P_tent);
                for (std::int64_t i = 0; i < AP.nrows; ++i)
                    for (std::int64_t k = AP.row_offsets[i]; k < AP.row_offsets[i + 1]; ++k)
                        AP.values[k] *= -omega * fine.inv_diag[i];

                // P_tent - omega D^{-1} A P_tent via triplet merge
                std::vector<Triplet> entries;
                entries.reserve(AP.nnz() + P_tent.nnz());
                for (std::int64_t i = 0; i < P_tent.nrows; ++i)
                    for (std::int64_t k = P_tent.row_offsets[i]; k < P_tent.row_offsets[i + 1]; ++k)
                        entries.push_back({static_cast<std::int32_t>(i), P_tent.col_indices[k],
                                           P_tent.values[k]});
                for (std::int64_t i = 0; i < AP.nrows; ++i)
                    for (std::int64_t k = AP.row_offsets[i]; k < AP.row_offsets[i + 1]; ++k)
                        entries.push_back({static_cast<std::int32_t>(i), AP.col_indices[k],
                                           AP.values[k]});
                fine.P = from_triplets(P_tent.nrows, num_agg, std::move(entries), true);

                const SparseMatrix Pt = transpose(fine.P);
                coarse_matrix = spgemm(Pt, spgemm(fine.A.matrix, fine.P));
            }

            fine.Pt = transpose(fine.P);
            hier_.levels.push_back(
                {make_operator(std::move(coarse_matrix)), {}, {}, {}, {}});
            hier_.levels.back().inv_diag = inverse_diagonal(hier_.levels.back().A);
        }

        // Smoother setup for all but the coarsest level.
        for (std::size_t l = 0; l + 1 < hier_.levels.size(); ++l) {
            AmgLevel& lev = hier_.levels[l];
            lev.smoother.lambda_max = estimate_lambda_max(
                lev.A, lev.inv_diag, cfg_.power_iters_setup, cfg_.seed ^ (0x517cc1ULL + l));
            lev.smoother.low = lev.smoother.lambda_max / cfg_.eig_ratio;
            lev.smoother.high = 1.1 * lev.smoother.lambda_max;
            lev.smoother.degree = cfg_.cheby_degree;
        }

        // Coarse solver.
        AmgLevel& last = hier_.levels.back();
        if (cfg_.coarse_solver == CoarseSolverKind::Direct) {
            hier_.coarse_direct = true;
            const LinearOperator& Ac = last.A;
            const std::int64_t nc = Ac.n();
            double trace = 0.0;
            for (double d : Ac.diag) trace += d;
            const double shift = 1e-8 * (trace > 0.0 ? trace / static_cast<double>(nc) : 1.0);

            coarse_factor_ = Dense(nc, nc);
            for (std::int64_t i = 0; i < nc; ++i)
                for (std::int64_t k = Ac.matrix.row_offsets[i]; k < Ac.matrix.row_offsets[i + 1]; ++k)
                    coarse_factor_(i, Ac.matrix.col_indices[k]) = Ac.matrix.values[k];
            double s = shift;
            Dense base = coarse_factor_;
            for (;;) {
                coarse_factor_ = base;
                for (std::int64_t i = 0; i < nc; ++i) coarse_factor_(i, i) += s;
                if (cholesky(coarse_factor_)) break;
                s *= 100.0; // singular beyond the kernel shift; escalate
            }
        } else {
            last.smoother.lambda_max = estimate_lambda_max(
                last.A, last.inv_diag, cfg_.coarse_power_iters,
                cfg_.seed ^ (0x9e3779ULL + hier_.levels.size()));
            last.smoother.low = last.smoother.lambda_max / cfg_.eig_ratio;
            last.smoother.high = 1.1 * last.smoother.lambda_max;
            last.smoother.degree = cfg_.cheby_degree;
        }
    }

    void coarse_solve(const Dense& Rhs, Dense& Z) const {
        const AmgLevel& last = hier_.levels.back();
        if (!hier_.coarse_direct) {
            ChebyshevOp op{&last.A, &last.inv_diag, last.smoother.low, last.smoother.high,
                           last.smoother.degree};
            chebyshev_solve(op, Rhs, Z);
            return;
        }
        Z = Rhs;
        for (std::int64_t j = 0; j < Z.cols; ++j) {
            solve_lower(coarse_factor_, Z.col(j));
            solve_lower_transposed(coarse_factor_, Z.col(j));
        }
    }

    void vcycle(std::size_t level, const Dense& Rhs, Dense& Z) const {
        if (level + 1 == hier_.levels.size()) {
            coarse_solve(Rhs, Z);
            return;
        }
        const AmgLevel& lev = hier_.levels[level];
        ChebyshevOp op{&lev.A, &lev.inv_diag, lev.smoother.low, lev.smoother.high,
                       lev.smoother.degree};

        chebyshev_solve(op, Rhs, Z); // pre-smoothing from zero

        Dense AZ, res(Rhs.rows, Rhs.cols);
        apply_block(lev.A, Z, AZ);
#pragma omp parallel for schedule(static)
        for (std::int64_t t = 0; t < static_cast<std::int64_t>(res.data.size()); ++t)
            res.data[t] = Rhs.data[t] - AZ.data[t];

        Dense coarse_rhs, coarse_z;
        kernels::spmv_block(lev.Pt, res, coarse_rhs);
        vcycle(level + 1, coarse_rhs, coarse_z);
        Dense corr;
        kernels::spmv_block(lev.P, coarse_z, corr);
        for (std::int64_t t = 0; t < static_cast<std::int64_t>(Z.data.size()); ++t)
            Z.data[t] += corr.data[t];

        // post-smoothing: one more Chebyshev solve on the updated residual
        apply_block(lev.A, Z, AZ);
#pragma omp parallel for schedule(static)
        for (std::int64_t t = 0; t < static_cast<std::int64_t>(res.data.size()); ++t)
            res.data[t] = Rhs.data[t] - AZ.data[t];
        Dense post;
        chebyshev_solve(op, res, post);
        for (std::int64_t t = 0; t < static_cast<std::int64_t>(Z.data.size()); ++t)
            Z.data[t] += post.data[t];
    }

    AmgConfig cfg_;
    AmgHierarchy hier_;
    Dense coarse_factor_;
};

} // namespace

std::unique_ptr<AmgPreconditioner> amg_build(const LinearOperator& A, const AmgConfig& cfg) {
    if (cfg.max_levels < 1) throw InfeasibleError("amg_build: max_levels < 1");
    if (cfg.drop_tol < 0.0 || cfg.drop_tol >= 1.0)
        throw InfeasibleError("amg_build: drop_tol outside [0,1)");
    if (cfg.cheby_degree < 1) throw InfeasibleError("amg_build: cheby_degree < 1");
    return std::make_unique<AmgPreconditionerImpl>(A, cfg);
}

void chebyshev_smooth(const AmgLevel& level, const Dense& rhs, Dense& z) {
    if (level.smoother.degree < 1)
        throw DimensionError("chebyshev_smooth: level has no smoother data");
    ChebyshevOp op{&level.A, &level.inv_diag, level.smoother.low, level.smoother.high,
                   level.smoother.degree};
    chebyshev_solve(op, rhs, z);
}

} // namespace specpart
