#include "specpart/errors.hpp"
#include "specpart/generators.hpp"
#include "specpart/graph.hpp"
#include "specpart/pipeline.hpp"
#include "specpart/sparse.hpp"

#include <CLI11.hpp>
#include <omp.h>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

// 0 success, 2 parse error, 3 solver breakdown, 4 infeasible configuration
constexpr int kExitParse = 2;
constexpr int kExitBreakdown = 3;
constexpr int kExitInfeasible = 4;

void configure_threads(int threads) {
    if (threads <= 0) {
        if (const char* env = std::getenv("SPECPART_THREADS")) threads = std::atoi(env);
    }
    if (threads > 0) omp_set_num_threads(threads);
}

specpart::Dense load_dense_block(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw specpart::ParseError("cannot open '" + path + "'", 0);
    std::int64_t rows = 0, cols = 0;
    if (!(in >> rows >> cols) || rows < 1 || cols < 1)
        throw specpart::ParseError("malformed block header in '" + path + "'", 1);
    specpart::Dense X(rows, cols);
    for (std::int64_t i = 0; i < rows; ++i)
        for (std::int64_t j = 0; j < cols; ++j)
            if (!(in >> X(i, j)))
                throw specpart::ParseError("truncated block data in '" + path + "'", 0);
    return X;
}

struct PartitionArgs {
    std::string input;
    std::int64_t parts = 0;
    std::string problem = "auto";
    std::string precond = "auto";
    std::string init = "auto";
    double tolerance = -1.0;
    int max_iters = 1000;
    std::uint64_t seed = 42;
    double epsilon = 0.01;
    int threads = 0;
    bool doubled_cut = false;
    bool trace = false;
    std::string output;
    std::string report;
    std::string init_file;
};

int run_partition(const PartitionArgs& a) {
    using namespace specpart;
    configure_threads(a.threads);

    RunConfig cfg;
    cfg.num_parts = a.parts;
    cfg.max_iters = a.max_iters;
    cfg.seed = a.seed;
    cfg.epsilon = a.epsilon;
    cfg.doubled_cut = a.doubled_cut;
    cfg.record_trace = a.trace;
    if (a.tolerance > 0.0) cfg.tol = a.tolerance;

    if (a.problem == "combinatorial") cfg.problem = ProblemChoice::Combinatorial;
    else if (a.problem == "generalized") cfg.problem = ProblemChoice::Generalized;
    else if (a.problem == "normalized") cfg.problem = ProblemChoice::Normalized;

    if (a.precond == "jacobi") cfg.precond = PrecondChoice::Jacobi;
    else if (a.precond == "polynomial") cfg.precond = PrecondChoice::Polynomial;
    else if (a.precond == "amg") cfg.precond = PrecondChoice::Amg;
    else if (a.precond == "none") cfg.precond = PrecondChoice::None;

    if (a.init == "random") cfg.init = InitChoice::Random;
    else if (a.init == "piecewise") cfg.init = InitChoice::PiecewiseConstant;

    SparseMatrix raw = parse_matrix_market_file(a.input);
    Graph whole = symmetrize(raw);
    auto [g, original_ids] = largest_connected_component(whole);
    const std::int64_t dropped = whole.n() - g.n();

    RunResult result;
    if (!a.init_file.empty()) {
        // Explicit initial block: bypass the init-selection step. Used for
        // warm starts and for exercising the breakdown path end to end.
        Dense X0 = load_dense_block(a.init_file);
        if (X0.rows != g.n())
            throw InfeasibleError("initial block has " + std::to_string(X0.rows) +
                                  " rows but the graph has " + std::to_string(g.n()) + " vertices");

        // Resolve everything else exactly as partition_graph would, then
        // run the solver on the provided block.
        GraphKind kind = classify(g);
        PrecondChoice pc = cfg.precond == PrecondChoice::Auto ? select_precond_auto(kind) : cfg.precond;
        auto [prob_auto, tol_auto] = select_defaults(kind, pc);
        ProblemKind prob = prob_auto;
        if (cfg.problem == ProblemChoice::Combinatorial) prob = ProblemKind::Combinatorial;
        else if (cfg.problem == ProblemChoice::Generalized) prob = ProblemKind::Generalized;
        else if (cfg.problem == ProblemChoice::Normalized) prob = ProblemKind::Normalized;
        const double tol = cfg.tol.value_or(tol_auto);
        const int d = eigenvector_count(cfg.num_parts);
        if (X0.cols != d)
            throw InfeasibleError("initial block must have d=" + std::to_string(d) + " columns");

        EigenProblem problem = build_problem(g, prob);
        std::unique_ptr<Preconditioner> M;
        if (pc == PrecondChoice::Jacobi) M = jacobi_build(problem.A);
        else if (pc == PrecondChoice::Polynomial) {
            PolyConfig poly;
            poly.seed = cfg.seed ^ 0x706f6c79ULL;
            M = polynomial_build(problem.A, poly);
        } else if (pc == PrecondChoice::Amg) {
            AmgConfig ac = kind.kind == Regularity::Regular ? AmgConfig::regular_defaults()
                                                            : AmgConfig::irregular_defaults();
            ac.seed = cfg.seed ^ 0x616d67ULL;
            M = amg_build(problem.A, ac);
        }

        SolverConfig sc;
        sc.nev = d;
        sc.tol = tol;
        sc.max_iters = cfg.max_iters;
        sc.seed = cfg.seed;
        EigenResult eig = lobpcg(problem, M.get(), X0, sc);

        Embedding emb = embed(eig.X);
        Partition part = mj_partition(emb, g.vertex_weights, cfg.num_parts);
        result.partition = make_partition(g, std::move(part.assignment),
                                          static_cast<std::int32_t>(cfg.num_parts), cfg.doubled_cut);
        result.report.n = g.n();
        result.report.edges = g.edge_count();
        result.report.graph_kind = kind;
        result.report.num_parts = cfg.num_parts;
        result.report.resolved = {prob, pc, tol, InitChoice::Random, d};
        result.report.seed = cfg.seed;
        result.report.max_iters = cfg.max_iters;
        result.report.epsilon = cfg.epsilon;
        result.report.doubled_cut = cfg.doubled_cut;
        result.report.iterations = eig.iterations;
        result.report.theta = eig.theta;
        result.report.residual_norms = eig.residual_norms;
        result.report.converged = eig.converged;
        result.report.cutsize = result.partition.cutsize;
        result.report.imbalance = result.partition.imbalance;
        result.report.part_weights = result.partition.part_weights;
        result.report.warnings.push_back("initial vectors loaded from " + a.init_file);
    } else {
        result = partition_graph(g, cfg);
    }
    result.report.dropped_vertices = dropped;
    if (dropped > 0)
        result.report.warnings.push_back("input graph was disconnected; kept the largest component (" +
                                         std::to_string(g.n()) + " of " + std::to_string(whole.n()) +
                                         " vertices)");

    if (!a.output.empty()) {
        std::ofstream out(a.output);
        write_partition(out, result.partition.assignment, original_ids);
    } else {
        write_partition(std::cout, result.partition.assignment, original_ids);
    }

    if (!a.report.empty()) {
        std::ofstream rep(a.report);
        rep << result.report.to_json() << '\n';
    }

    std::cerr << "n=" << result.report.n << " K=" << result.report.num_parts
              << " cutsize=" << result.report.cutsize << " imbalance=" << result.report.imbalance
              << " iters=" << result.report.iterations << '\n';
    for (const std::string& w : result.report.warnings) std::cerr << "warning: " << w << '\n';
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"spectral graph partitioner"};
    app.require_subcommand(0, 1);

    PartitionArgs pa;
    app.add_option("--input", pa.input, "Matrix Market graph file");
    app.add_option("--parts", pa.parts, "number of parts K");
    app.add_option("--problem", pa.problem, "auto|combinatorial|generalized|normalized")
        ->check(CLI::IsMember({"auto", "combinatorial", "generalized", "normalized"}));
    app.add_option("--precond", pa.precond, "auto|jacobi|polynomial|amg|none")
        ->check(CLI::IsMember({"auto", "jacobi", "polynomial", "amg", "none"}));
    app.add_option("--init", pa.init, "auto|random|piecewise")
        ->check(CLI::IsMember({"auto", "random", "piecewise"}));
    app.add_option("--tolerance", pa.tolerance, "eigensolver residual tolerance");
    app.add_option("--max-iters", pa.max_iters, "eigensolver iteration cap");
    app.add_option("--seed", pa.seed, "random seed");
    app.add_option("--epsilon", pa.epsilon, "allowed imbalance ratio (default 0.01)");
    app.add_option("--threads", pa.threads, "OpenMP thread count (or SPECPART_THREADS)");
    app.add_flag("--doubled-cut", pa.doubled_cut, "report cut edges counted twice");
    app.add_flag("--trace", pa.trace, "record per-iteration solver trace in the report");
    app.add_option("--output", pa.output, "partition file (default stdout)");
    app.add_option("--report", pa.report, "write a JSON run report");
    app.add_option("--init-file", pa.init_file, "dense initial block: 'rows cols' header, row-major values");

    auto* gen = app.add_subcommand("gen", "generate a synthetic graph");
    std::string gen_kind;
    std::vector<std::int64_t> gen_dims;
    int gen_stencil = 27;
    std::uint64_t gen_seed = 0;
    std::string gen_out;
    gen->add_option("kind", gen_kind, "grid2d|stencil3d|ring|path|randomregular|scalefree")
        ->required();
    gen->add_option("dims", gen_dims, "dimensions / sizes")->required();
    gen->add_option("--stencil", gen_stencil, "7 or 27 (stencil3d)");
    gen->add_option("--seed", gen_seed, "generator seed");
    gen->add_option("--out", gen_out, "output .mtx path (default stdout)");

    auto* sweep = app.add_subcommand("sweep", "run a config sweep and print a TSV table");
    std::vector<std::string> sweep_graphs;
    std::vector<double> sweep_tols;
    std::vector<std::string> sweep_preconds;
    std::vector<std::string> sweep_problems;
    std::int64_t sweep_parts = 8;
    std::uint64_t sweep_seed = 42;
    int sweep_max_iters = 1000;
    sweep->add_option("--gen", sweep_graphs, "generator specs, e.g. grid2d:64,64")->required();
    sweep->add_option("--parts", sweep_parts, "number of parts K");
    sweep->add_option("--tolerances", sweep_tols, "tolerance values");
    sweep->add_option("--preconds", sweep_preconds, "jacobi|polynomial|amg|none values");
    sweep->add_option("--problems", sweep_problems, "combinatorial|generalized|normalized values");
    sweep->add_option("--seed", sweep_seed, "run seed");
    sweep->add_option("--max-iters", sweep_max_iters, "eigensolver iteration cap");

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) {
            specpart::GeneratorSpec spec;
            spec.seed = gen_seed;
            spec.stencil_points = gen_stencil;
            auto dim = [&](std::size_t i) -> std::int64_t {
                if (i >= gen_dims.size())
                    throw specpart::InfeasibleError("gen: missing dimension for " + gen_kind);
                return gen_dims[i];
            };
            using K = specpart::GeneratorSpec::Kind;
            if (gen_kind == "grid2d") spec = specpart::GeneratorSpec::grid2d(dim(0), dim(1));
            else if (gen_kind == "stencil3d") {
                spec = specpart::GeneratorSpec::stencil3d(dim(0), dim(1), dim(2), gen_stencil);
            } else if (gen_kind == "ring") spec.kind = K::Ring, spec.a = dim(0);
            else if (gen_kind == "path") spec.kind = K::Path, spec.a = dim(0);
            else if (gen_kind == "randomregular")
                spec = specpart::GeneratorSpec::random_regular(dim(0), dim(1), gen_seed);
            else if (gen_kind == "scalefree")
                spec = specpart::GeneratorSpec::scale_free(dim(0), dim(1), gen_seed);
            else throw specpart::InfeasibleError("gen: unknown kind '" + gen_kind + "'");

            specpart::Graph g = specpart::generate(spec);
            if (!gen_out.empty()) {
                std::ofstream out(gen_out);
                specpart::write_matrix_market_pattern_symmetric(out, g.adjacency);
            } else {
                specpart::write_matrix_market_pattern_symmetric(std::cout, g.adjacency);
            }
            return 0;
        }

        if (sweep->parsed()) {
            std::vector<specpart::Graph> storage;
            std::vector<std::pair<std::string, const specpart::Graph*>> graphs;
            storage.reserve(sweep_graphs.size());
            for (const std::string& spec_text : sweep_graphs) {
                storage.push_back(specpart::generate(specpart::GeneratorSpec::parse(spec_text)));
                graphs.emplace_back(spec_text, &storage.back());
            }

            std::vector<std::pair<std::string, specpart::RunConfig>> configs;
            auto base = [&]() {
                specpart::RunConfig c;
                c.num_parts = sweep_parts;
                c.seed = sweep_seed;
                c.max_iters = sweep_max_iters;
                return c;
            };
            auto precond_of = [](const std::string& s) {
                using PC = specpart::PrecondChoice;
                if (s == "jacobi") return PC::Jacobi;
                if (s == "polynomial") return PC::Polynomial;
                if (s == "amg") return PC::Amg;
                if (s == "none") return PC::None;
                throw specpart::InfeasibleError("sweep: unknown preconditioner '" + s + "'");
            };
            auto problem_of = [](const std::string& s) {
                using PR = specpart::ProblemChoice;
                if (s == "combinatorial") return PR::Combinatorial;
                if (s == "generalized") return PR::Generalized;
                if (s == "normalized") return PR::Normalized;
                throw specpart::InfeasibleError("sweep: unknown problem '" + s + "'");
            };

            const std::vector<std::string> preconds =
                sweep_preconds.empty() ? std::vector<std::string>{"jacobi"} : sweep_preconds;
            const std::vector<std::string> problems =
                sweep_problems.empty() ? std::vector<std::string>{"auto"} : sweep_problems;
            const std::vector<double> tols = sweep_tols.empty() ? std::vector<double>{0.0} : sweep_tols;

            for (const std::string& pc : preconds)
                for (const std::string& pr : problems)
                    for (double t : tols) {
                        specpart::RunConfig c = base();
                        c.precond = precond_of(pc);
                        if (pr != "auto") c.problem = problem_of(pr);
                        if (t > 0.0) c.tol = t;
                        std::string label = pc + "/" + pr + "/tol=" + (t > 0.0 ? std::to_string(t) : "auto");
                        configs.emplace_back(std::move(label), c);
                    }

            specpart::SweepTable table = specpart::run_sweep(graphs, configs);
            std::cout << table.to_tsv();
            return 0;
        }

        if (pa.input.empty() || pa.parts < 2) {
            std::cerr << "error: --input and --parts >= 2 are required (see --help)\n";
            return kExitInfeasible;
        }
        return run_partition(pa);
    } catch (const specpart::ParseError& e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return kExitParse;
    } catch (const specpart::BreakdownError& e) {
        std::cerr << "solver breakdown: " << e.what() << '\n';
        return kExitBreakdown;
    } catch (const specpart::InfeasibleError& e) {
        std::cerr << "infeasible: " << e.what() << '\n';
        return kExitInfeasible;
    } catch (const specpart::DegenerateDegreeError& e) {
        std::cerr << "infeasible: " << e.what() << '\n';
        return kExitInfeasible;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
