#pragma once

#include "specpart/dense.hpp"
#include "specpart/laplacian.hpp"

#include <cstdint>
#include <memory>
#include <vector>

namespace specpart {

enum class PrecondKind { Jacobi, Polynomial, Amg };

// Apply-to-block interface: H ~= A^{-1} R. Applies are linear, reentrant and
// deterministic; built preconditioners are immutable.
class Preconditioner {
public:
    virtual ~Preconditioner() = default;
    virtual PrecondKind kind() const = 0;
    virtual void apply(const Dense& R, Dense& H) const = 0;

    Dense apply(const Dense& R) const {
        Dense H(R.rows, R.cols);
        apply(R, H);
        return H;
    }
};

// M = diag(A)^{-1}; near-zero diagonals act as identity rows.
std::unique_ptr<Preconditioner> jacobi_build(const LinearOperator& A);

enum class PolyVariant { GmresRoots, Chebyshev };

struct PolyConfig {
    int degree = 25;
    std::uint64_t seed = 0;        // Arnoldi seed vector
    PolyVariant variant = PolyVariant::GmresRoots;
};

class PolynomialPreconditioner : public Preconditioner {
public:
    virtual int requested_degree() const = 0;
    virtual int achieved_degree() const = 0;
    virtual bool truncated() const = 0;
};

// GMRES-polynomial preconditioner: harmonic Ritz values of a seeded Arnoldi
// process become the residual-polynomial roots, applied in product form in
// modified Leja order. Early Arnoldi breakdown truncates the degree.
std::unique_ptr<PolynomialPreconditioner> polynomial_build(const LinearOperator& A,
                                                           const PolyConfig& cfg);

enum class AggregationMode { Smoothed, Plain };
enum class CoarseSolverKind { Direct, Chebyshev };

struct AmgConfig {
    AggregationMode smoothing = AggregationMode::Smoothed;
    double drop_tol = 0.0;
    int max_levels = 20;
    int cheby_degree = 3;
    int power_iters_setup = 10;
    double eig_ratio = 7.0;
    std::int64_t coarse_size_threshold = 500;
    CoarseSolverKind coarse_solver = CoarseSolverKind::Direct;
    int coarse_power_iters = 100;
    std::uint64_t seed = 0;

    static AmgConfig regular_defaults();
    static AmgConfig irregular_defaults();
};

struct ChebyshevData {
    double lambda_max = 0.0; // power-iteration estimate of lambda_max(D^{-1}A)
    double low = 0.0;        // lambda_max / eig_ratio
    double high = 0.0;       // 1.1 * lambda_max
    int degree = 0;
};

struct AmgLevel {
    LinearOperator A;
    SparseMatrix P;               // prolongation from the next coarser level
    SparseMatrix Pt;              // restriction (P transposed)
    ChebyshevData smoother;
    std::vector<double> inv_diag; // 1/a_ii used by the smoother
};

struct AmgHierarchy {
    std::vector<AmgLevel> levels; // levels[0] is the fine level; last has no P
    bool stagnated = false;
    bool coarse_direct = false;   // direct solve vs Chebyshev on the last level
};

class AmgPreconditioner : public Preconditioner {
public:
    virtual const AmgHierarchy& hierarchy() const = 0;
};

// Aggregation AMG per config: drop-tolerance strength graph, greedy
// aggregation, piecewise-constant tentative prolongator (optionally
// smoothed), Galerkin coarse operators, Chebyshev smoothing, direct or
// Chebyshev coarse solve.
std::unique_ptr<AmgPreconditioner> amg_build(const LinearOperator& A, const AmgConfig& cfg);

// One Chebyshev smoothing solve z ~= A^{-1} rhs on a hierarchy level,
// starting from zero. The level must carry smoother data.
void chebyshev_smooth(const AmgLevel& level, const Dense& rhs, Dense& z);

const char* precond_name(PrecondKind kind);

} // namespace specpart
