#include "specpart/eigensolver.hpp"
#include "specpart/errors.hpp"
#include "specpart/generators.hpp"
#include "specpart/kernels.hpp"

#include "test_support.hpp"

#include <doctest.h>

#include <cmath>
#include <cstring>

using namespace specpart;

namespace {

LinearOperator diag_operator(const std::vector<double>& d) {
    SparseMatrix m;
    m.nrows = m.ncols = static_cast<std::int64_t>(d.size());
    m.row_offsets.resize(d.size() + 1);
    m.col_indices.resize(d.size());
    m.values = d;
    for (std::size_t i = 0; i <= d.size(); ++i) m.row_offsets[i] = static_cast<std::int64_t>(i);
    for (std::size_t i = 0; i < d.size(); ++i) m.col_indices[i] = static_cast<std::int32_t>(i);
    return make_operator(std::move(m));
}

EigenResult solve(const EigenProblem& p, int nev, double tol, std::uint64_t seed = 3,
                  const Preconditioner* M = nullptr, int max_iters = 2000) {
    SolverConfig cfg;
    cfg.nev = nev;
    cfg.tol = tol;
    cfg.max_iters = max_iters;
    cfg.seed = seed;
    Dense X0 = initial_guess_random(p.A.n(), nev, seed);
    return lobpcg(p, M, X0, cfg);
}

} // namespace

TEST_SUITE("eigensolver") {

TEST_CASE("random initial guess is deterministic and seed sensitive") {
    Dense a = initial_guess_random(4, 2, 7);
    Dense b = initial_guess_random(4, 2, 7);
    CHECK(a.data == b.data);

    Dense c = initial_guess_random(100, 3, 1);
    Dense d = initial_guess_random(100, 3, 2);
    CHECK(c.data != d.data);

    for (double x : a.data) {
        CHECK(x >= -1.0);
        CHECK(x <= 1.0);
    }

    CHECK_THROWS_AS(initial_guess_random(4, 5, 0), InfeasibleError);
}

TEST_CASE("piecewise initial guess block layout") {
    Dense x = initial_guess_piecewise(6, 3);
    for (int i = 0; i < 6; ++i) CHECK(x(i, 0) == 1.0);
    for (int i = 0; i < 6; ++i) CHECK(x(i, 1) == (i < 2 ? 1.0 : 0.0));
    for (int i = 0; i < 6; ++i) CHECK(x(i, 2) == (i >= 2 && i < 4 ? 1.0 : 0.0));

    // remainder rule: n=7, d=3 gives block sizes (3,2,2)
    Dense y = initial_guess_piecewise(7, 3);
    for (int i = 0; i < 7; ++i) CHECK(y(i, 1) == (i < 3 ? 1.0 : 0.0));
    for (int i = 0; i < 7; ++i) CHECK(y(i, 2) == (i >= 3 && i < 5 ? 1.0 : 0.0));

    Dense z = initial_guess_piecewise(5, 1);
    CHECK(z.cols == 1);
    for (int i = 0; i < 5; ++i) CHECK(z(i, 0) == 1.0);

    CHECK_THROWS_AS(initial_guess_piecewise(2, 3), InfeasibleError);
}

TEST_CASE("rayleigh-ritz on the identity basis recovers the diagonal") {
    LinearOperator A = diag_operator({3, 1, 2});
    Dense S = Dense::identity(3);
    RayleighRitzResult r = rayleigh_ritz(S, A, nullptr, 2);
    REQUIRE(r.theta.size() == 2);
    CHECK(r.theta[0] == doctest::Approx(1.0));
    CHECK(r.theta[1] == doctest::Approx(2.0));
    CHECK(r.kept_columns.size() == 3);
}

TEST_CASE("rayleigh-ritz rank repair drops duplicate columns") {
    LinearOperator A = diag_operator({3, 1, 2});
    Dense S(3, 3);
    S(0, 0) = 1.0;
    S(0, 1) = 1.0; // duplicate of column 0
    S(1, 2) = 1.0;
    RayleighRitzResult r = rayleigh_ritz(S, A, nullptr, 2);
    CHECK(r.kept_columns == std::vector<std::int64_t>{0, 2});
    CHECK(r.theta[0] == doctest::Approx(1.0));
    CHECK(r.theta[1] == doctest::Approx(3.0));

    // with nev unsatisfiable after the drop, it is a breakdown
    CHECK_THROWS_AS(rayleigh_ritz(S, A, nullptr, 3), BreakdownError);
}

TEST_CASE("rayleigh-ritz on the path eigenbasis returns the exact spectrum") {
    Graph g = graph_from_edges(3, {{0, 1}, {1, 2}});
    LinearOperator L = build_combinatorial(g);
    // eigenvalues of the 3-path Laplacian are {0, 1, 3}
    const double s2 = 1.0 / std::sqrt(2.0), s3 = 1.0 / std::sqrt(3.0), s6 = 1.0 / std::sqrt(6.0);
    Dense S(3, 3);
    S(0, 0) = s3;  S(1, 0) = s3;      S(2, 0) = s3;
    S(0, 1) = s2;  S(1, 1) = 0.0;     S(2, 1) = -s2;
    S(0, 2) = s6;  S(1, 2) = -2 * s6; S(2, 2) = s6;
    RayleighRitzResult r = rayleigh_ritz(S, L, nullptr, 3);
    CHECK(r.theta[0] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(r.theta[1] == doctest::Approx(1.0));
    CHECK(r.theta[2] == doctest::Approx(3.0));
}

TEST_CASE("lobpcg finds the kernel of a connected laplacian") {
    std::mt19937_64 rng(5);
    Graph g = testsupport::random_connected_graph(25, 40, rng);
    EigenProblem p = build_problem(g, ProblemKind::Combinatorial);
    SolverConfig cfg;
    cfg.nev = 1;
    cfg.tol = 1e-8;
    cfg.max_iters = 500;
    Dense X0 = initial_guess_piecewise(g.n(), 1);
    EigenResult r = lobpcg(p, nullptr, X0, cfg);
    CHECK(std::abs(r.theta[0]) <= 1e-8 * p.A.spectral_bound);
    // eigenvector proportional to the constant vector
    const double ref = r.X(0, 0);
    for (std::int64_t i = 0; i < g.n(); ++i) CHECK(r.X(i, 0) == doctest::Approx(ref).epsilon(1e-6));
}

TEST_CASE("lobpcg on the 4-cycle matches the known spectrum") {
    Graph g = graph_from_edges(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}});

    // standard problem: spectrum {0, 2, 2, 4}
    EigenProblem p = build_problem(g, ProblemKind::Combinatorial);
    EigenResult r = solve(p, 3, 1e-9);
    CHECK(r.theta[0] == doctest::Approx(0.0).epsilon(1e-8));
    CHECK(r.theta[1] == doctest::Approx(2.0));
    CHECK(r.theta[2] == doctest::Approx(2.0));

    // generalized problem with D = 2I halves the spectrum
    EigenProblem pg = build_problem(g, ProblemKind::Generalized);
    EigenResult rg = solve(pg, 3, 1e-9);
    CHECK(rg.theta[0] == doctest::Approx(0.0).epsilon(1e-8));
    CHECK(rg.theta[1] == doctest::Approx(1.0));
    CHECK(rg.theta[2] == doctest::Approx(1.0));
}

TEST_CASE("lobpcg on the normalized single edge") {
    Graph g = graph_from_edges(2, {{0, 1}});
    EigenProblem p = build_problem(g, ProblemKind::Normalized);
    EigenResult r = solve(p, 2, 1e-10);
    CHECK(r.theta[0] == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(r.theta[1] == doctest::Approx(2.0));
}

TEST_CASE("residual contract and B-orthonormality hold post hoc") {
    std::mt19937_64 rng(23);
    Graph g = testsupport::random_connected_graph(40, 80, rng);
    for (ProblemKind kind :
         {ProblemKind::Combinatorial, ProblemKind::Generalized, ProblemKind::Normalized}) {
        EigenProblem p = build_problem(g, kind);
        auto M = jacobi_build(p.A);
        EigenResult r = solve(p, 4, 1e-6, 11, M.get());
        REQUIRE(r.all_converged());

        // ||A x - theta B x|| <= tol * spectral_bound for converged columns
        Dense AX = apply_block(p.A, r.X);
        Dense BX = p.B ? apply_block(*p.B, r.X) : r.X;
        for (int j = 0; j < 4; ++j) {
            double norm2 = 0.0;
            for (std::int64_t i = 0; i < g.n(); ++i) {
                const double v = AX(i, j) - r.theta[j] * BX(i, j);
                norm2 += v * v;
            }
            CHECK(std::sqrt(norm2) <= 1e-6 * p.A.spectral_bound);
        }

        // Gram deviation
        Dense G = kernels::gram(r.X, BX);
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
                CHECK(std::abs(G(i, j) - (i == j ? 1.0 : 0.0)) <= 1e-8);

        // ascending Ritz values, bounded below by the PSD floor
        for (int j = 1; j < 4; ++j) CHECK(r.theta[j] >= r.theta[j - 1]);
        CHECK(r.theta[0] >= -1e-6 * p.A.spectral_bound);
    }
}

TEST_CASE("disabling locking changes the path but not the answer") {
    std::mt19937_64 rng(83);
    Graph g = testsupport::random_connected_graph(45, 90, rng);
    EigenProblem p = build_problem(g, ProblemKind::Combinatorial);
    auto M = jacobi_build(p.A);

    SolverConfig cfg;
    cfg.nev = 4;
    cfg.tol = 1e-8;
    cfg.max_iters = 1000;
    Dense X0 = initial_guess_random(g.n(), 4, 55);

    EigenResult locked = lobpcg(p, M.get(), X0, cfg);
    cfg.locking = false;
    EigenResult unlocked = lobpcg(p, M.get(), X0, cfg);

    REQUIRE(locked.all_converged());
    REQUIRE(unlocked.all_converged());
    for (int j = 0; j < 4; ++j)
        CHECK(locked.theta[j] == doctest::Approx(unlocked.theta[j]).epsilon(1e-8));
}

TEST_CASE("ritz value sum is nonincreasing across iterations") {
    std::mt19937_64 rng(31);
    Graph g = testsupport::random_connected_graph(50, 120, rng);
    EigenProblem p = build_problem(g, ProblemKind::Combinatorial);

    SolverConfig cfg;
    cfg.nev = 3;
    cfg.tol = 1e-10;
    cfg.max_iters = 300;
    cfg.record_trace = true;
    Dense X0 = initial_guess_random(g.n(), 3, 17);
    EigenResult r = lobpcg(p, nullptr, X0, cfg);

    REQUIRE(r.trace.size() >= 2);
    for (std::size_t t = 1; t < r.trace.size(); ++t) {
        double prev = 0.0, cur = 0.0;
        for (double v : r.trace[t - 1].theta) prev += v;
        for (double v : r.trace[t].theta) cur += v;
        CHECK(cur <= prev * (1.0 + 1e-12) + 1e-12);
    }
}

TEST_CASE("oracle equivalence on random connected graphs") {
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 6; ++trial) {
        const std::int64_t n = 10 + rng() % 51;
        Graph g = testsupport::random_connected_graph(n, rng() % (3 * n), rng);
        const int nev = 4;

        for (ProblemKind kind :
             {ProblemKind::Combinatorial, ProblemKind::Generalized, ProblemKind::Normalized}) {
            EigenProblem p = build_problem(g, kind);
            auto M = jacobi_build(p.A);
            EigenResult r = solve(p, nev, 1e-8, 1234, M.get());

            std::vector<double> expected =
                p.B ? testsupport::oracle_smallest_generalized(p.A.matrix, p.B->matrix, nev)
                    : testsupport::oracle_smallest_eigenvalues(p.A.matrix, nev);
            for (int j = 0; j < nev; ++j)
                CHECK(std::abs(r.theta[j] - expected[j]) <= 1e-6);
        }
    }
}

TEST_CASE("fixed seed gives a bit-identical result") {
    std::mt19937_64 rng(51);
    Graph g = testsupport::random_connected_graph(60, 150, rng);
    EigenProblem p = build_problem(g, ProblemKind::Combinatorial);
    auto M = jacobi_build(p.A);

    EigenResult a = solve(p, 3, 1e-6, 77, M.get());
    EigenResult b = solve(p, 3, 1e-6, 77, M.get());
    CHECK(a.theta == b.theta);
    CHECK(a.X.data == b.X.data);
    CHECK(a.iterations == b.iterations);
    CHECK(a.residual_norms == b.residual_norms);
}

TEST_CASE("rank-deficient initial block breaks down after one retry") {
    Graph g = graph_from_edges(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}});
    EigenProblem p = build_problem(g, ProblemKind::Combinatorial);

    Dense X0(4, 3); // rank 1: three copies of the same column
    for (int j = 0; j < 3; ++j) X0(0, j) = 1.0;

    SolverConfig cfg;
    cfg.nev = 3;
    cfg.tol = 1e-6;
    cfg.max_iters = 50;
    try {
        lobpcg(p, nullptr, X0, cfg);
        FAIL("expected BreakdownError");
    } catch (const BreakdownError& e) {
        CHECK(e.retried());
    }
}

TEST_CASE("partial convergence at max_iters is returned, not thrown") {
    std::mt19937_64 rng(61);
    Graph g = testsupport::random_connected_graph(80, 160, rng);
    EigenProblem p = build_problem(g, ProblemKind::Combinatorial);
    SolverConfig cfg;
    cfg.nev = 4;
    cfg.tol = 1e-12;
    cfg.max_iters = 2;
    Dense X0 = initial_guess_random(g.n(), 4, 9);
    EigenResult r = lobpcg(p, nullptr, X0, cfg);
    CHECK(r.iterations == 2);
    CHECK_FALSE(r.all_converged());
    CHECK(r.X.cols == 4);
}

TEST_CASE("preconditioning accelerates convergence on a grid") {
    Graph g = generate(GeneratorSpec::grid2d(16, 16));
    EigenProblem p = build_problem(g, ProblemKind::Combinatorial);

    auto amg = amg_build(p.A, AmgConfig::regular_defaults());
    EigenResult with_amg = solve(p, 3, 1e-4, 5, amg.get());
    EigenResult plain = solve(p, 3, 1e-4, 5, nullptr);
    CHECK(with_amg.all_converged());
    CHECK(with_amg.iterations < plain.iterations);
}

TEST_CASE("preconditioner ordering on a 7-point stencil: amg < polynomial < jacobi") {
    Graph g = generate(GeneratorSpec::stencil3d(20, 20, 20, 7)); // n = 8000
    EigenProblem p = build_problem(g, ProblemKind::Combinatorial);

    SolverConfig cfg;
    cfg.nev = 4;
    cfg.tol = 1e-3;
    cfg.max_iters = 3000;
    Dense X0 = initial_guess_random(g.n(), cfg.nev, 42);

    auto jac = jacobi_build(p.A);
    PolyConfig pc;
    pc.seed = 42;
    auto poly = polynomial_build(p.A, pc);
    AmgConfig ac = AmgConfig::regular_defaults();
    ac.seed = 42;
    auto amg = amg_build(p.A, ac);

    const int ij = lobpcg(p, jac.get(), X0, cfg).iterations;
    const int ip = lobpcg(p, poly.get(), X0, cfg).iterations;
    const int ia = lobpcg(p, amg.get(), X0, cfg).iterations;
    CHECK(ia < ip);
    CHECK(ip < ij);
}

} // TEST_SUITE
