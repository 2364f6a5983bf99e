#include "specpart/partitioner.hpp"

#include "specpart/errors.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <numeric>

namespace specpart {

int eigenvector_count(std::int64_t num_parts) {
    if (num_parts < 2) throw InfeasibleError("eigenvector_count: K must be >= 2");
    // floor(log2 K) + 1
    return std::bit_width(static_cast<std::uint64_t>(num_parts));
}

Embedding embed(const Dense& eigenvectors) {
    if (eigenvectors.cols < 2) throw InfeasibleError("embed: need at least 2 eigenvectors");
    Embedding e;
    e.d = static_cast<int>(eigenvectors.cols);
    e.coords = eigenvectors.columns(1, eigenvectors.cols - 1);
    return e;
}

std::int64_t MjPlan::leaf_count() const {
    if (sections.empty()) return 1;
    std::int64_t total = 0;
    for (const MjPlan& s : sections) total += s.leaf_count();
    return total;
}

int MjPlan::depth() const {
    if (sections.empty()) return 0;
    int d = 0;
    for (const MjPlan& s : sections) d = std::max(d, s.depth());
    return d + 1;
}

namespace {

MjPlan build_plan(std::int64_t target, int dim, int remaining) {
    MjPlan node;
    node.leaves = target;
    if (target <= 1 || remaining <= 0) return node;

    const double root = std::pow(static_cast<double>(target), 1.0 / remaining);
    std::int64_t m = static_cast<std::int64_t>(std::ceil(root - 1e-12));
    m = std::min(target, std::max<std::int64_t>(m, 2));

    node.dim = dim;
    // child targets as equal as possible, larger ones first
    const std::int64_t base = target / m;
    const std::int64_t rem = target % m;
    for (std::int64_t s = 0; s < m; ++s) {
        const std::int64_t child_target = base + (s < rem ? 1 : 0);
        node.sections.push_back(build_plan(child_target, dim + 1, remaining - 1));
    }
    return node;
}

} // namespace

MjPlan section_counts(std::int64_t num_parts, int dims) {
    if (num_parts < 1) throw InfeasibleError("section_counts: K < 1");
    if (dims < 1) throw InfeasibleError("section_counts: dims < 1");
    MjPlan plan = build_plan(num_parts, 0, dims);
    return plan;
}

namespace {

struct MjState {
    const Dense* coords;
    std::span<const double> weights;
    int dims;
    std::vector<std::int32_t>* assignment;
    std::int32_t next_part;
};

// Recursive multisection of `ids` (already owned by this node). Cut
// positions are exact weighted quantiles: child j extends while the running
// weight is below its proportional target. Point order within a node is by
// (coordinate, vertex id), so degenerate coordinates split by id.
void mj_recurse(MjState& st, const MjPlan& plan, std::vector<std::int64_t>& ids) {
    if (plan.sections.empty()) {
        const std::int32_t part = st.next_part++;
        for (std::int64_t v : ids) (*st.assignment)[v] = part;
        return;
    }

    const int dim = plan.dim % st.dims; // dimensions cycle round-robin
    const double* coord = st.coords->col(dim);

    std::sort(ids.begin(), ids.end(), [&](std::int64_t a, std::int64_t b) {
        return coord[a] != coord[b] ? coord[a] < coord[b] : a < b;
    });

    double total_weight = 0.0;
    for (std::int64_t v : ids) total_weight += st.weights[v];
    const std::int64_t total_leaves = plan.leaves;

    std::size_t pos = 0;
    double consumed = 0.0;
    std::int64_t leaves_done = 0;
    for (std::size_t s = 0; s < plan.sections.size(); ++s) {
        const MjPlan& child = plan.sections[s];
        leaves_done += child.leaf_count();

        std::vector<std::int64_t> child_ids;
        if (s + 1 == plan.sections.size()) {
            child_ids.assign(ids.begin() + pos, ids.end());
            pos = ids.size();
        } else {
            const double target =
                total_weight * static_cast<double>(leaves_done) / static_cast<double>(total_leaves);
            // stop at the smallest prefix whose weight reaches the quantile
            // target, but keep every section feasible: each child takes at
            // least its own leaf count and leaves enough points for the rest
            const std::int64_t leaves_after = total_leaves - leaves_done;
            const std::int64_t max_take =
                static_cast<std::int64_t>(ids.size()) - static_cast<std::int64_t>(pos) - leaves_after;
            const std::int64_t min_take = child.leaf_count();
            std::int64_t taken = 0;
            while (pos < ids.size() && taken < max_take &&
                   (taken < min_take || consumed < target)) {
                consumed += st.weights[ids[pos]];
                child_ids.push_back(ids[pos]);
                ++pos;
                ++taken;
            }
        }
        mj_recurse(st, child, child_ids);
    }
}

} // namespace

Partition mj_partition(const Embedding& emb, std::span<const double> weights,
                       std::int64_t num_parts) {
    const std::int64_t n = emb.coords.rows;
    if (num_parts < 1) throw InfeasibleError("mj_partition: K < 1");
    if (n < num_parts)
        throw InfeasibleError("mj_partition: fewer points than parts (n=" + std::to_string(n) +
                              ", K=" + std::to_string(num_parts) + ")");
    if (static_cast<std::int64_t>(weights.size()) != n)
        throw DimensionError("mj_partition: weights length mismatch");
    for (double w : weights)
        if (!(w > 0.0)) throw InfeasibleError("mj_partition: weights must be positive");

    const int dims = static_cast<int>(emb.coords.cols);
    const MjPlan plan = section_counts(num_parts, dims);

    std::vector<std::int32_t> assignment(n, -1);
    MjState st{&emb.coords, weights, dims, &assignment, 0};

    std::vector<std::int64_t> ids(n);
    std::iota(ids.begin(), ids.end(), std::int64_t{0});
    mj_recurse(st, plan, ids);

    Partition p;
    p.num_parts = static_cast<std::int32_t>(num_parts);
    p.part_weights.assign(num_parts, 0.0);
    for (std::int64_t v = 0; v < n; ++v) p.part_weights[assignment[v]] += weights[v];
    p.assignment = std::move(assignment);
    p.imbalance = imbalance(p.part_weights);
    p.cutsize = 0.0; // graph metrics are attached by the caller
    return p;
}

} // namespace specpart
