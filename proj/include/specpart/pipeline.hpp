#pragma once

#include "specpart/eigensolver.hpp"
#include "specpart/graph.hpp"
#include "specpart/laplacian.hpp"
#include "specpart/partitioner.hpp"
#include "specpart/preconditioners.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace specpart {

enum class ProblemChoice { Auto, Combinatorial, Generalized, Normalized };
enum class PrecondChoice { Auto, Jacobi, Polynomial, Amg, None };
enum class InitChoice { Auto, Random, PiecewiseConstant };

struct RunConfig {
    std::int64_t num_parts = 2;
    ProblemChoice problem = ProblemChoice::Auto;
    PrecondChoice precond = PrecondChoice::Auto;
    std::optional<double> tol;          // nullopt = pick by graph kind
    int max_iters = 1000;
    std::uint64_t seed = 42;
    double epsilon = 0.01;
    bool doubled_cut = false;
    InitChoice init = InitChoice::Auto;
    bool record_trace = false;
};

struct ResolvedConfig {
    ProblemKind problem = ProblemKind::Combinatorial;
    PrecondChoice precond = PrecondChoice::Jacobi;
    double tol = 1e-2;
    InitChoice init = InitChoice::Random;
    int eigenvectors = 0; // d
};

struct StageTimes {
    double laplacian_s = 0.0;
    double eigensolve_s = 0.0; // includes preconditioner setup
    double partition_s = 0.0;
    double total_s = 0.0;
};

struct AmgLevelStats {
    std::int64_t n = 0;
    std::int64_t nnz = 0;
};

struct RunReport {
    // graph
    std::int64_t n = 0;
    std::int64_t edges = 0;
    GraphKind graph_kind;
    std::int64_t dropped_vertices = 0; // filled by the CLI when it extracts a component

    // resolved configuration
    std::int64_t num_parts = 0;
    ResolvedConfig resolved;
    std::uint64_t seed = 0;
    int max_iters = 0;
    double epsilon = 0.0;
    bool doubled_cut = false;

    // solver
    int iterations = 0;
    std::vector<double> theta;
    std::vector<double> residual_norms;
    std::vector<std::uint8_t> converged;
    std::vector<TraceRecord> trace;
    std::vector<AmgLevelStats> amg_levels;

    StageTimes times;

    // partition quality, recomputed from the final assignment
    double cutsize = 0.0;
    double imbalance = 0.0;
    std::vector<double> part_weights;

    std::vector<std::string> warnings;

    std::string to_json() const; // schema in docs/report_schema.md
};

struct RunResult {
    Partition partition;
    RunReport report;
};

// Default (problem kind, tolerance) pair by graph kind and preconditioner.
// `precond` must already be resolved (not Auto).
std::pair<ProblemKind, double> select_defaults(const GraphKind& kind, PrecondChoice precond);

// Amg on regular graphs, polynomial on irregular ones.
PrecondChoice select_precond_auto(const GraphKind& kind);

// Random vectors on regular graphs, piecewise constant on irregular ones.
InitChoice select_initial_vectors(const GraphKind& kind);

// End-to-end run: classify, resolve defaults, build operators, solve, embed,
// partition, measure. The caller is responsible for passing a connected
// graph (the CLI extracts the largest component first).
RunResult partition_graph(const Graph& g, const RunConfig& cfg);

const char* problem_choice_name(ProblemChoice c);
const char* precond_choice_name(PrecondChoice c);
const char* init_choice_name(InitChoice c);

} // namespace specpart
