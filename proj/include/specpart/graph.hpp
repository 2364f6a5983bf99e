#pragma once

#include "specpart/sparse.hpp"

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace specpart {

// Undirected graph as a symmetric CSR adjacency with no stored self-loops.
// adjacency.values carries the edge costs (unit by default), duplicated on
// both (i,j) and (j,i).
struct Graph {
    SparseMatrix adjacency;
    std::vector<double> vertex_weights;

    std::int64_t n() const { return adjacency.nrows; }
    std::int64_t edge_count() const { return adjacency.nnz() / 2; }

    std::int64_t degree(std::int64_t v) const {
        return adjacency.row_offsets[v + 1] - adjacency.row_offsets[v];
    }
    double weighted_degree(std::int64_t v) const;
    double total_vertex_weight() const;

    // Symmetric pattern, no diagonal, positive weights. Throws std::logic_error.
    void validate() const;
};

enum class Regularity { Regular, Irregular };

struct GraphKind {
    Regularity kind = Regularity::Regular;
    std::int64_t max_degree = 0;
    double avg_degree = 0.0;
    double ratio = 0.0;
};

struct Partition {
    std::vector<std::int32_t> assignment; // length n, values in [0, K)
    std::int32_t num_parts = 0;
    std::vector<double> part_weights;
    double cutsize = 0.0;
    double imbalance = 0.0;
};

// Graph from the pattern of A + A^T with the diagonal removed; unit vertex
// weights and edge costs.
Graph symmetrize(const SparseMatrix& A);

// Builds a graph directly from an edge list (used by the generators).
// Each undirected edge appears once; costs default to unit.
Graph graph_from_edges(std::int64_t n, const std::vector<std::pair<std::int32_t, std::int32_t>>& edges);

// Vertex-induced subgraph on the largest connected component plus the map
// new id -> original id. Ties go to the component holding the smallest
// original vertex id.
std::pair<Graph, std::vector<std::int64_t>> largest_connected_component(const Graph& g);

// Regular iff max_degree / avg_degree <= 10.
GraphKind classify(const Graph& g);

// Total cost of edges crossing parts, each undirected edge counted once
// (twice with `doubled`, matching distributed reporting conventions).
double cutsize(const Graph& g, std::span<const std::int32_t> assignment, bool doubled = false);

double imbalance(std::span<const double> part_weights);

// Validates the assignment, tallies part weights and computes both metrics.
Partition make_partition(const Graph& g, std::vector<std::int32_t> assignment, std::int32_t num_parts,
                         bool doubled_cut = false);

// One "originalVertexId partId" line per vertex, ascending by original id.
// `original_ids` maps local vertex -> original id; empty means identity.
void write_partition(std::ostream& out, std::span<const std::int32_t> assignment,
                     std::span<const std::int64_t> original_ids);

// Reads the format written by write_partition: (original id, part) pairs.
std::vector<std::pair<std::int64_t, std::int32_t>> read_partition(std::istream& in);

} // namespace specpart
