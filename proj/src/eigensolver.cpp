#include "specpart/eigensolver.hpp"

#include "specpart/errors.hpp"
#include "specpart/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <random>
#include <string>

namespace specpart {

bool EigenResult::all_converged() const {
    for (std::uint8_t c : converged)
        if (!c) return false;
    return !converged.empty();
}

Dense initial_guess_random(std::int64_t n, int d, std::uint64_t seed) {
    if (d > n) throw InfeasibleError("initial_guess_random: d > n");
    if (d < 1) throw InfeasibleError("initial_guess_random: d < 1");

    std::mt19937_64 rng(seed);
    Dense X(n, d);
    for (double& x : X.data) {
        // 53-bit mantissa mapped to [0,1), then to [-1,1); avoids the
        // implementation-defined distribution adapters
        const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        x = 2.0 * u - 1.0;
    }
    return X;
}

Dense initial_guess_piecewise(std::int64_t n, int d) {
    if (d > n) throw InfeasibleError("initial_guess_piecewise: d > n");
    if (d < 1) throw InfeasibleError("initial_guess_piecewise: d < 1");

    Dense X(n, d);
    for (std::int64_t i = 0; i < n; ++i) X(i, 0) = 1.0;

    const std::int64_t base = n / d;
    const std::int64_t rem = n % d;
    std::int64_t start = 0;
    for (int b = 0; b < d - 1; ++b) {
        const std::int64_t len = base + (b < rem ? 1 : 0);
        for (std::int64_t i = start; i < start + len; ++i) X(i, b + 1) = 1.0;
        start += len;
    }
    return X;
}

namespace {

constexpr double kRankDropTol = 1e-10;

class BInner {
public:
    explicit BInner(const LinearOperator* B) : b_(B) {}

    bool identity() const { return b_ == nullptr; }

    // B * v into scratch; returns pointer to use for dot products.
    const double* bv(const double* v, std::int64_t n, std::vector<double>& scratch) const {
        if (!b_) return v;
        scratch.resize(n);
        const std::vector<double>& d = b_->diag;
        for (std::int64_t i = 0; i < n; ++i) scratch[i] = d[i] * v[i];
        return scratch.data();
    }

    Dense apply(const Dense& X) const {
        if (!b_) return X;
        Dense Y;
        kernels::diag_scale(b_->diag, X, Y);
        return Y;
    }

private:
    const LinearOperator* b_;
};

// Modified Gram-Schmidt in the B inner product with one reorthogonalization
// pass. Columns of V are orthonormalized against `against` (already
// B-orthonormal, may be null) and against accepted earlier columns; columns
// whose norm collapses below kRankDropTol times the original are dropped.
// Returns the indices of the surviving input columns; V is compacted.
std::vector<std::int64_t> b_orthonormalize(Dense& V, const Dense* against, const BInner& inner) {
    const std::int64_t n = V.rows;
    std::vector<std::int64_t> kept;
    std::vector<double> scratch;
    std::int64_t out = 0;

    for (std::int64_t j = 0; j < V.cols; ++j) {
        double* vj = V.col(j);
        const double* bvj = inner.bv(vj, n, scratch);
        const double orig = std::sqrt(std::max(0.0, kernels::dot(vj, bvj, n)));
        if (orig == 0.0) continue;

        for (int pass = 0; pass < 2; ++pass) {
            if (against) {
                for (std::int64_t q = 0; q < against->cols; ++q) {
                    const double* aq = against->col(q);
                    const double c = kernels::dot(aq, inner.bv(vj, n, scratch), n);
                    kernels::axpy(-c, aq, vj, n);
                }
            }
            for (std::int64_t q = 0; q < out; ++q) {
                const double* vq = V.col(q);
                const double c = kernels::dot(vq, inner.bv(vj, n, scratch), n);
                kernels::axpy(-c, vq, vj, n);
            }
        }

        const double nrm = std::sqrt(std::max(0.0, kernels::dot(vj, inner.bv(vj, n, scratch), n)));
        if (nrm < kRankDropTol * orig) continue;

        const double inv = 1.0 / nrm;
        double* dst = V.col(out);
        if (dst != vj) std::memcpy(dst, vj, sizeof(double) * n);
        for (std::int64_t i = 0; i < n; ++i) dst[i] *= inv;
        kept.push_back(j);
        ++out;
    }

    V.cols = out;
    V.data.resize(static_cast<std::size_t>(n) * out);
    return kept;
}

struct ProjectedEig {
    std::vector<double> theta; // nev smallest
    Dense Y;                   // coefficients, m x nev
};

// Rayleigh-Ritz on an already B-orthonormal basis Q: eigendecomposition of
// the symmetrized projection Q^T A Q.
ProjectedEig projected_eig(const Dense& Q, const LinearOperator& A, int nev) {
    Dense AQ = apply_block(A, Q);
    Dense H = kernels::gram(Q, AQ);
    for (std::int64_t j = 0; j < H.cols; ++j)
        for (std::int64_t i = 0; i < j; ++i) {
            const double s = 0.5 * (H(i, j) + H(j, i));
            H(i, j) = H(j, i) = s;
        }

    std::vector<double> values;
    Dense vectors;
    sym_eig(H, values, vectors);

    ProjectedEig out;
    out.theta.assign(values.begin(), values.begin() + nev);
    out.Y = vectors.columns(0, nev);
    return out;
}

} // namespace

RayleighRitzResult rayleigh_ritz(const Dense& S, const LinearOperator& A, const LinearOperator* B,
                                 int nev) {
    if (S.cols < nev) throw DimensionError("rayleigh_ritz: fewer columns than nev");
    if (S.rows != A.n()) throw DimensionError("rayleigh_ritz: row count != operator size");

    BInner inner(B);
    RayleighRitzResult r;
    r.basis = S;
    r.kept_columns = b_orthonormalize(r.basis, nullptr, inner);
    if (static_cast<int>(r.kept_columns.size()) < nev)
        throw BreakdownError(0, false);

    ProjectedEig pe = projected_eig(r.basis, A, nev);
    r.coeffs = std::move(pe.Y);
    r.theta = std::move(pe.theta);
    return r;
}

EigenResult lobpcg(const EigenProblem& problem, const Preconditioner* M, const Dense& X0,
                   const SolverConfig& cfg) {
    const LinearOperator& A = problem.A;
    const LinearOperator* B = problem.B ? &*problem.B : nullptr;
    const std::int64_t n = A.n();
    const int nev = cfg.nev;

    if (nev < 1) throw InfeasibleError("lobpcg: nev < 1");
    if (X0.cols != nev) throw DimensionError("lobpcg: X0 must have nev columns");
    if (X0.rows != n) throw DimensionError("lobpcg: X0 rows != operator size");
    if (nev > n) throw InfeasibleError("lobpcg: nev > n");
    if (!(cfg.tol > 0.0)) throw InfeasibleError("lobpcg: tol must be positive");
    if (cfg.max_iters < 1) throw InfeasibleError("lobpcg: max_iters < 1");

    // Convergence threshold tol * min(1, bound): an absolute residual test
    // for ordinary (unit-cost) Laplacians, capped by the Gershgorin scaling
    // so converged columns always satisfy ||r|| <= tol * spectral_bound.
    // The threshold is theta-free, which keeps the kernel column (theta ~ 0)
    // convergable.
    const double conv_scale =
        A.spectral_bound > 0.0 ? std::min(1.0, A.spectral_bound) : 1.0;
    BInner inner(B);

    EigenResult result;
    result.converged.assign(nev, 0);
    result.residual_norms.assign(nev, 0.0);

    Dense X = X0;
    Dense P(n, 0);
    std::vector<double> theta;

    // Residuals R = A X - B X diag(theta), per-column norms and flags.
    Dense R;
    auto update_residuals = [&](const Dense& Xc) {
        Dense AX = apply_block(A, Xc);
        Dense BX = inner.apply(Xc);
        R = std::move(AX);
        for (int j = 0; j < nev; ++j) {
            const double* bx = BX.col(j);
            double* rj = R.col(j);
            const double t = theta[j];
            for (std::int64_t i = 0; i < n; ++i) rj[i] -= t * bx[i];
            result.residual_norms[j] = kernels::norm2(rj, n);
            result.converged[j] = result.residual_norms[j] <= cfg.tol * conv_scale ? 1 : 0;
        }
    };

    auto record_trace = [&](int iter) {
        if (!cfg.record_trace) return;
        TraceRecord t;
        t.iter = iter;
        auto [mn, mx] = std::minmax_element(result.residual_norms.begin(), result.residual_norms.end());
        t.min_residual = *mn;
        t.max_residual = *mx;
        t.theta = theta;
        result.trace.push_back(std::move(t));
    };

    int iter = 0;
    bool retried = false;

    // Initial Rayleigh-Ritz on the guess block.
    for (;;) {
        Dense Xo = X;
        std::vector<std::int64_t> kept = b_orthonormalize(Xo, nullptr, inner);
        if (static_cast<int>(kept.size()) < nev) {
            if (retried) throw BreakdownError(iter, true);
            retried = true;
            ++result.breakdown_retries;
            continue; // deterministic input: will fail again and abort
        }
        ProjectedEig pe = projected_eig(Xo, A, nev);
        theta = std::move(pe.theta);
        kernels::mult(Xo, pe.Y, X);
        break;
    }
    update_residuals(X);
    record_trace(0);

    while (iter < cfg.max_iters && !result.all_converged()) {
        ++iter;

        // Columns that still iterate. Without locking all columns do.
        std::vector<int> active;
        for (int j = 0; j < nev; ++j)
            if (!cfg.locking || !result.converged[j]) active.push_back(j);

        Dense R_I(n, static_cast<std::int64_t>(active.size()));
        for (std::size_t a = 0; a < active.size(); ++a)
            std::memcpy(R_I.col(a), R.col(active[a]), sizeof(double) * n);

        Dense H_I = M ? M->apply(R_I) : R_I;

        bool breakdown = false;
        Dense Xo, S, Y;
        std::int64_t hp_offset = 0;
        for (;;) { // one retry with P cleared
            Xo = X;
            std::vector<std::int64_t> kept_x = b_orthonormalize(Xo, nullptr, inner);
            if (static_cast<int>(kept_x.size()) < nev) {
                breakdown = true;
            } else {
                Dense Ho = H_I;
                b_orthonormalize(Ho, &Xo, inner);

                Dense XH(n, Xo.cols + Ho.cols);
                std::memcpy(XH.col(0), Xo.data.data(), sizeof(double) * n * Xo.cols);
                if (Ho.cols > 0)
                    std::memcpy(XH.col(Xo.cols), Ho.data.data(), sizeof(double) * n * Ho.cols);

                Dense Po = P;
                if (Po.cols > 0) b_orthonormalize(Po, &XH, inner);

                S = Dense(n, XH.cols + Po.cols);
                std::memcpy(S.col(0), XH.data.data(), sizeof(double) * n * XH.cols);
                if (Po.cols > 0)
                    std::memcpy(S.col(XH.cols), Po.data.data(), sizeof(double) * n * Po.cols);
                hp_offset = Xo.cols;
                breakdown = false;
            }

            if (!breakdown) break;
            if (retried) throw BreakdownError(iter, true);
            retried = true;
            ++result.breakdown_retries;
            P = Dense(n, 0); // steepest-descent restart
        }

        ProjectedEig pe = projected_eig(S, A, nev);
        theta = std::move(pe.theta);
        Y = std::move(pe.Y);

        kernels::mult(S, Y, X);
        update_residuals(X);

        // New directions: the H/P contribution to the unconverged Ritz vectors.
        std::vector<int> next_active;
        for (int j = 0; j < nev; ++j)
            if (!cfg.locking || !result.converged[j]) next_active.push_back(j);

        const std::int64_t hp_cols = S.cols - hp_offset;
        if (hp_cols > 0 && !next_active.empty()) {
            Dense S_hp(n, hp_cols);
            std::memcpy(S_hp.data.data(), S.col(hp_offset), sizeof(double) * n * hp_cols);
            Dense Y_hp(hp_cols, static_cast<std::int64_t>(next_active.size()));
            for (std::size_t a = 0; a < next_active.size(); ++a)
                for (std::int64_t r = 0; r < hp_cols; ++r)
                    Y_hp(r, a) = Y(hp_offset + r, next_active[a]);
            kernels::mult(S_hp, Y_hp, P);
        } else {
            P = Dense(n, 0);
        }

        record_trace(iter);
    }

    result.iterations = iter;
    result.theta = std::move(theta);
    result.X = std::move(X);
    return result;
}

} // namespace specpart
