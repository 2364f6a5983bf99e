#include "specpart/pipeline.hpp"

#include "specpart/errors.hpp"

#include <json.hpp>

#include <chrono>
#include <stdexcept>

namespace specpart {

namespace {
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}
} // namespace

std::pair<ProblemKind, double> select_defaults(const GraphKind& kind, PrecondChoice precond) {
    const bool regular = kind.kind == Regularity::Regular;
    switch (precond) {
    case PrecondChoice::Jacobi:
    case PrecondChoice::None: // not covered by the decision flow; follows Jacobi
        return regular ? std::pair{ProblemKind::Combinatorial, 1e-3}
                       : std::pair{ProblemKind::Generalized, 1e-2};
    case PrecondChoice::Polynomial:
        return regular ? std::pair{ProblemKind::Combinatorial, 1e-3}
                       : std::pair{ProblemKind::Normalized, 1e-2};
    case PrecondChoice::Amg:
        return regular ? std::pair{ProblemKind::Combinatorial, 1e-2}
                       : std::pair{ProblemKind::Generalized, 1e-2};
    case PrecondChoice::Auto:
        break;
    }
    throw std::invalid_argument("select_defaults: preconditioner must be resolved");
}

PrecondChoice select_precond_auto(const GraphKind& kind) {
    return kind.kind == Regularity::Regular ? PrecondChoice::Amg : PrecondChoice::Polynomial;
}

InitChoice select_initial_vectors(const GraphKind& kind) {
    return kind.kind == Regularity::Regular ? InitChoice::Random : InitChoice::PiecewiseConstant;
}

RunResult partition_graph(const Graph& g, const RunConfig& cfg) {
    if (cfg.num_parts < 2) throw InfeasibleError("partition_graph: K must be >= 2");
    if (cfg.num_parts > g.n())
        throw InfeasibleError("partition_graph: K exceeds vertex count (K=" +
                              std::to_string(cfg.num_parts) + ", n=" + std::to_string(g.n()) + ")");
    if (cfg.epsilon < 0.0) throw InfeasibleError("partition_graph: epsilon < 0");

    const auto t_total = Clock::now();

    RunResult out;
    RunReport& rep = out.report;
    rep.n = g.n();
    rep.edges = g.edge_count();
    rep.num_parts = cfg.num_parts;
    rep.seed = cfg.seed;
    rep.max_iters = cfg.max_iters;
    rep.epsilon = cfg.epsilon;
    rep.doubled_cut = cfg.doubled_cut;

    // Resolution order: classify, then preconditioner, then (problem, tol),
    // then initial vectors. Explicit settings short-circuit their step.
    rep.graph_kind = classify(g);

    ResolvedConfig& rc = rep.resolved;
    rc.precond =
        cfg.precond == PrecondChoice::Auto ? select_precond_auto(rep.graph_kind) : cfg.precond;
    const auto [auto_problem, auto_tol] = select_defaults(rep.graph_kind, rc.precond);
    switch (cfg.problem) {
    case ProblemChoice::Auto: rc.problem = auto_problem; break;
    case ProblemChoice::Combinatorial: rc.problem = ProblemKind::Combinatorial; break;
    case ProblemChoice::Generalized: rc.problem = ProblemKind::Generalized; break;
    case ProblemChoice::Normalized: rc.problem = ProblemKind::Normalized; break;
    }
    rc.tol = cfg.tol.value_or(auto_tol);
    rc.init = cfg.init == InitChoice::Auto ? select_initial_vectors(rep.graph_kind) : cfg.init;
    rc.eigenvectors = eigenvector_count(cfg.num_parts);

    const int d = rc.eigenvectors;
    if (d > g.n())
        throw InfeasibleError("partition_graph: needs d=" + std::to_string(d) +
                              " eigenvectors but n=" + std::to_string(g.n()));

    // Stage 1: operators.
    const auto t_lap = Clock::now();
    EigenProblem problem = build_problem(g, rc.problem);
    rep.times.laplacian_s = seconds_since(t_lap);

    // Stage 2: preconditioner setup + eigensolve.
    const auto t_eig = Clock::now();
    std::unique_ptr<Preconditioner> M;
    switch (rc.precond) {
    case PrecondChoice::Jacobi:
        M = jacobi_build(problem.A);
        break;
    case PrecondChoice::Polynomial: {
        PolyConfig pc;
        pc.seed = cfg.seed ^ 0x706f6c79ULL;
        M = polynomial_build(problem.A, pc);
        break;
    }
    case PrecondChoice::Amg: {
        AmgConfig ac = rep.graph_kind.kind == Regularity::Regular
                           ? AmgConfig::regular_defaults()
                           : AmgConfig::irregular_defaults();
        ac.seed = cfg.seed ^ 0x616d67ULL;
        auto amg = amg_build(problem.A, ac);
        for (const AmgLevel& lev : amg->hierarchy().levels)
            rep.amg_levels.push_back({lev.A.n(), lev.A.matrix.nnz()});
        if (amg->hierarchy().stagnated)
            rep.warnings.push_back("amg coarsening stagnated; hierarchy stopped early");
        M = std::move(amg);
        break;
    }
    case PrecondChoice::None:
    case PrecondChoice::Auto:
        break;
    }

    Dense X0 = rc.init == InitChoice::Random ? initial_guess_random(g.n(), d, cfg.seed)
                                             : initial_guess_piecewise(g.n(), d);

    SolverConfig sc;
    sc.nev = d;
    sc.tol = rc.tol;
    sc.max_iters = cfg.max_iters;
    sc.seed = cfg.seed;
    sc.record_trace = cfg.record_trace;

    EigenResult eig = lobpcg(problem, M.get(), X0, sc);
    rep.times.eigensolve_s = seconds_since(t_eig);

    rep.iterations = eig.iterations;
    rep.theta = eig.theta;
    rep.residual_norms = eig.residual_norms;
    rep.converged = eig.converged;
    rep.trace = eig.trace;
    if (eig.breakdown_retries > 0)
        rep.warnings.push_back("eigensolver recovered from a basis breakdown by clearing the "
                               "search directions");
    if (!eig.all_converged())
        rep.warnings.push_back("eigensolver reached max_iters with unconverged columns; "
                               "partitioning on partially converged eigenvectors");

    // Stage 3: embedding + multi-jagged partitioning.
    const auto t_mj = Clock::now();
    Embedding emb = embed(eig.X);
    Partition part = mj_partition(emb, g.vertex_weights, cfg.num_parts);
    rep.times.partition_s = seconds_since(t_mj);

    out.partition = make_partition(g, std::move(part.assignment),
                                   static_cast<std::int32_t>(cfg.num_parts), cfg.doubled_cut);
    rep.cutsize = out.partition.cutsize;
    rep.imbalance = out.partition.imbalance;
    rep.part_weights = out.partition.part_weights;
    if (rep.imbalance > 1.0 + cfg.epsilon)
        rep.warnings.push_back("imbalance " + std::to_string(rep.imbalance) +
                               " exceeds 1+epsilon = " + std::to_string(1.0 + cfg.epsilon));

    rep.times.total_s = seconds_since(t_total);
    return out;
}

std::string RunReport::to_json() const {
    nlohmann::json j;
    j["graph"] = {{"n", n},
                  {"edges", edges},
                  {"max_degree", graph_kind.max_degree},
                  {"avg_degree", graph_kind.avg_degree},
                  {"degree_ratio", graph_kind.ratio},
                  {"kind", graph_kind.kind == Regularity::Regular ? "regular" : "irregular"},
                  {"dropped_vertices", dropped_vertices}};
    j["config"] = {{"parts", num_parts},
                   {"problem", problem_name(resolved.problem)},
                   {"preconditioner", precond_choice_name(resolved.precond)},
                   {"tolerance", resolved.tol},
                   {"initial_vectors", init_choice_name(resolved.init)},
                   {"eigenvectors", resolved.eigenvectors},
                   {"seed", seed},
                   {"max_iters", max_iters},
                   {"epsilon", epsilon},
                   {"doubled_cut", doubled_cut}};
    j["solver"] = {{"iterations", iterations},
                   {"theta", theta},
                   {"residual_norms", residual_norms},
                   {"converged", std::vector<bool>(converged.begin(), converged.end())}};
    if (!amg_levels.empty()) {
        nlohmann::json levels = nlohmann::json::array();
        for (const AmgLevelStats& l : amg_levels) levels.push_back({{"n", l.n}, {"nnz", l.nnz}});
        j["solver"]["amg_levels"] = levels;
    }
    if (!trace.empty()) {
        nlohmann::json tr = nlohmann::json::array();
        for (const TraceRecord& t : trace)
            tr.push_back({{"iter", t.iter},
                          {"min_residual", t.min_residual},
                          {"max_residual", t.max_residual},
                          {"theta", t.theta}});
        j["solver"]["trace"] = tr;
    }
    j["times"] = {{"laplacian_s", times.laplacian_s},
                  {"eigensolve_s", times.eigensolve_s},
                  {"partition_s", times.partition_s},
                  {"total_s", times.total_s}};
    j["partition"] = {{"cutsize", cutsize},
                      {"imbalance", imbalance},
                      {"part_weights", part_weights}};
    j["warnings"] = warnings;
    return j.dump(2);
}

const char* problem_choice_name(ProblemChoice c) {
    switch (c) {
    case ProblemChoice::Auto: return "auto";
    case ProblemChoice::Combinatorial: return "combinatorial";
    case ProblemChoice::Generalized: return "generalized";
    case ProblemChoice::Normalized: return "normalized";
    }
    return "?";
}

const char* precond_choice_name(PrecondChoice c) {
    switch (c) {
    case PrecondChoice::Auto: return "auto";
    case PrecondChoice::Jacobi: return "jacobi";
    case PrecondChoice::Polynomial: return "polynomial";
    case PrecondChoice::Amg: return "amg";
    case PrecondChoice::None: return "none";
    }
    return "?";
}

const char* init_choice_name(InitChoice c) {
    switch (c) {
    case InitChoice::Auto: return "auto";
    case InitChoice::Random: return "random";
    case InitChoice::PiecewiseConstant: return "piecewise";
    }
    return "?";
}

} // namespace specpart
