#pragma once

#include "specpart/dense.hpp"
#include "specpart/graph.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace specpart {

// d = floor(log2 K) + 1 eigenvectors for a K-way partition. K >= 2.
int eigenvector_count(std::int64_t num_parts);

// Coordinates for the geometric partitioner: eigenvector block with the
// leading (constant) column dropped.
struct Embedding {
    Dense coords; // n x (d-1)
    int d = 0;
};

Embedding embed(const Dense& eigenvectors);

// Recursive multisection plan. Dimensions are cut in round-robin order; a
// node with target t and r remaining dimensions splits into
// min(t, ceil(t^(1/r))) sections with leaf targets as equal as possible.
struct MjPlan {
    std::int64_t leaves = 1;
    int dim = -1;                 // dimension this node cuts along; -1 for leaves
    std::vector<MjPlan> sections; // empty for leaves

    std::int64_t leaf_count() const;
    int depth() const;
};

MjPlan section_counts(std::int64_t num_parts, int dims);

// Weighted multi-jagged partitioning of the embedded points. Cuts are exact
// weighted quantiles along the node's dimension; coordinate ties break by
// ascending vertex id. Throws InfeasibleError when n < K.
Partition mj_partition(const Embedding& emb, std::span<const double> weights,
                       std::int64_t num_parts);

} // namespace specpart
