#include "specpart/graph.hpp"

#include "specpart/errors.hpp"

#include <algorithm>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace specpart {

double Graph::weighted_degree(std::int64_t v) const {
    double s = 0.0;
    for (std::int64_t k = adjacency.row_offsets[v]; k < adjacency.row_offsets[v + 1]; ++k)
        s += adjacency.value_at(k);
    return s;
}

double Graph::total_vertex_weight() const {
    double s = 0.0;
    for (double w : vertex_weights) s += w;
    return s;
}

void Graph::validate() const {
    adjacency.validate();
    if (adjacency.nrows != adjacency.ncols) throw std::logic_error("adjacency not square");
    if (static_cast<std::int64_t>(vertex_weights.size()) != n())
        throw std::logic_error("vertex_weights size != n");
    for (double w : vertex_weights)
        if (!(w > 0.0)) throw std::logic_error("vertex weight not strictly positive");

    const SparseMatrix t = transpose(adjacency);
    if (t.col_indices != adjacency.col_indices || t.row_offsets != adjacency.row_offsets)
        throw std::logic_error("adjacency pattern not symmetric");
    for (std::int64_t i = 0; i < n(); ++i)
        for (std::int64_t k = adjacency.row_offsets[i]; k < adjacency.row_offsets[i + 1]; ++k)
            if (adjacency.col_indices[k] == i) throw std::logic_error("self-loop stored");
}

Graph symmetrize(const SparseMatrix& A) {
    if (A.nrows != A.ncols) throw std::invalid_argument("symmetrize: matrix not square");

    std::vector<Triplet> entries;
    entries.reserve(static_cast<std::size_t>(2 * A.nnz()));
    for (std::int64_t i = 0; i < A.nrows; ++i) {
        for (std::int64_t k = A.row_offsets[i]; k < A.row_offsets[i + 1]; ++k) {
            const std::int32_t j = A.col_indices[k];
            if (j == static_cast<std::int32_t>(i)) continue; // drop the diagonal
            entries.push_back({static_cast<std::int32_t>(i), j, 1.0});
            entries.push_back({j, static_cast<std::int32_t>(i), 1.0});
        }
    }

    Graph g;
    SparseMatrix pat = from_triplets(A.nrows, A.ncols, std::move(entries), /*sum_duplicates=*/false);
    pat.values.assign(pat.col_indices.size(), 1.0); // unit edge costs
    g.adjacency = std::move(pat);
    g.vertex_weights.assign(A.nrows, 1.0);
    return g;
}

Graph graph_from_edges(std::int64_t n,
                       const std::vector<std::pair<std::int32_t, std::int32_t>>& edges) {
    std::vector<Triplet> entries;
    entries.reserve(2 * edges.size());
    for (auto [u, v] : edges) {
        if (u == v) continue;
        entries.push_back({u, v, 1.0});
        entries.push_back({v, u, 1.0});
    }
    Graph g;
    SparseMatrix pat = from_triplets(n, n, std::move(entries), /*sum_duplicates=*/false);
    pat.values.assign(pat.col_indices.size(), 1.0);
    g.adjacency = std::move(pat);
    g.vertex_weights.assign(n, 1.0);
    return g;
}

namespace {

// Path-compressing union-find over vertex ids.
class DisjointSets {
public:
    explicit DisjointSets(std::int64_t n) : parent_(n) {
        std::iota(parent_.begin(), parent_.end(), std::int64_t{0});
    }

    std::int64_t find(std::int64_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    void unite(std::int64_t a, std::int64_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        // attach the larger id under the smaller: roots end up being the
        // minimum vertex id of their component, which makes ties deterministic
        if (a < b)
            parent_[b] = a;
        else
            parent_[a] = b;
    }

private:
    std::vector<std::int64_t> parent_;
};

} // namespace

std::pair<Graph, std::vector<std::int64_t>> largest_connected_component(const Graph& g) {
    const std::int64_t n = g.n();
    if (n == 0) throw std::invalid_argument("largest_connected_component: empty graph");

    DisjointSets ds(n);
    for (std::int64_t i = 0; i < n; ++i)
        for (std::int64_t k = g.adjacency.row_offsets[i]; k < g.adjacency.row_offsets[i + 1]; ++k)
            ds.unite(i, g.adjacency.col_indices[k]);

    std::vector<std::int64_t> size_by_root(n, 0);
    for (std::int64_t i = 0; i < n; ++i) ++size_by_root[ds.find(i)];

    // Roots are component minima, so scanning ascending and keeping strict
    // improvement picks the smallest-id component among equal sizes.
    std::int64_t best_root = -1, best_size = 0;
    for (std::int64_t r = 0; r < n; ++r) {
        if (size_by_root[r] > best_size) {
            best_size = size_by_root[r];
            best_root = r;
        }
    }

    std::vector<std::int64_t> old_ids;
    old_ids.reserve(best_size);
    std::vector<std::int64_t> new_id(n, -1);
    for (std::int64_t i = 0; i < n; ++i) {
        if (ds.find(i) == best_root) {
            new_id[i] = static_cast<std::int64_t>(old_ids.size());
            old_ids.push_back(i);
        }
    }

    Graph sub;
    sub.adjacency.nrows = best_size;
    sub.adjacency.ncols = best_size;
    sub.adjacency.row_offsets.assign(best_size + 1, 0);
    sub.vertex_weights.resize(best_size);

    for (std::int64_t v = 0; v < best_size; ++v) {
        const std::int64_t old_v = old_ids[v];
        sub.vertex_weights[v] = g.vertex_weights[old_v];
        for (std::int64_t k = g.adjacency.row_offsets[old_v]; k < g.adjacency.row_offsets[old_v + 1];
             ++k) {
            sub.adjacency.col_indices.push_back(
                static_cast<std::int32_t>(new_id[g.adjacency.col_indices[k]]));
            sub.adjacency.values.push_back(g.adjacency.value_at(k));
            ++sub.adjacency.row_offsets[v + 1];
        }
    }
    for (std::int64_t v = 0; v < best_size; ++v)
        sub.adjacency.row_offsets[v + 1] += sub.adjacency.row_offsets[v];

    return {std::move(sub), std::move(old_ids)};
}

GraphKind classify(const Graph& g) {
    if (g.n() == 0) throw std::invalid_argument("classify: empty graph");
    GraphKind k;
    for (std::int64_t v = 0; v < g.n(); ++v) k.max_degree = std::max(k.max_degree, g.degree(v));
    k.avg_degree = static_cast<double>(g.adjacency.nnz()) / static_cast<double>(g.n());
    k.ratio = k.avg_degree > 0.0 ? static_cast<double>(k.max_degree) / k.avg_degree
                                 : (k.max_degree > 0 ? std::numeric_limits<double>::infinity() : 0.0);
    k.kind = (k.ratio <= 10.0) ? Regularity::Regular : Regularity::Irregular;
    return k;
}

double cutsize(const Graph& g, std::span<const std::int32_t> assignment, bool doubled) {
    if (static_cast<std::int64_t>(assignment.size()) != g.n())
        throw std::invalid_argument("cutsize: assignment length mismatch");

    double cut = 0.0;
    for (std::int64_t i = 0; i < g.n(); ++i) {
        for (std::int64_t k = g.adjacency.row_offsets[i]; k < g.adjacency.row_offsets[i + 1]; ++k) {
            const std::int32_t j = g.adjacency.col_indices[k];
            if (j > i && assignment[i] != assignment[j]) cut += g.adjacency.value_at(k);
        }
    }
    return doubled ? 2.0 * cut : cut;
}

double imbalance(std::span<const double> part_weights) {
    if (part_weights.empty()) throw std::invalid_argument("imbalance: no parts");
    double total = 0.0, maxw = 0.0;
    for (double w : part_weights) {
        total += w;
        maxw = std::max(maxw, w);
    }
    if (total <= 0.0) throw std::invalid_argument("imbalance: total weight not positive");
    return maxw / (total / static_cast<double>(part_weights.size()));
}

Partition make_partition(const Graph& g, std::vector<std::int32_t> assignment, std::int32_t num_parts,
                         bool doubled_cut) {
    if (static_cast<std::int64_t>(assignment.size()) != g.n())
        throw std::invalid_argument("make_partition: assignment length mismatch");

    Partition p;
    p.num_parts = num_parts;
    p.part_weights.assign(num_parts, 0.0);
    for (std::int64_t v = 0; v < g.n(); ++v) {
        const std::int32_t part = assignment[v];
        if (part < 0 || part >= num_parts)
            throw std::invalid_argument("make_partition: part id out of range");
        p.part_weights[part] += g.vertex_weights[v];
    }
    for (double w : p.part_weights)
        if (w <= 0.0) throw std::invalid_argument("make_partition: empty part");

    p.assignment = std::move(assignment);
    p.cutsize = cutsize(g, p.assignment, doubled_cut);
    p.imbalance = imbalance(p.part_weights);
    return p;
}

void write_partition(std::ostream& out, std::span<const std::int32_t> assignment,
                     std::span<const std::int64_t> original_ids) {
    for (std::size_t v = 0; v < assignment.size(); ++v) {
        const std::int64_t id = original_ids.empty() ? static_cast<std::int64_t>(v) : original_ids[v];
        out << id << ' ' << assignment[v] << '\n';
    }
}

std::vector<std::pair<std::int64_t, std::int32_t>> read_partition(std::istream& in) {
    std::vector<std::pair<std::int64_t, std::int32_t>> rows;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::int64_t id;
        std::int32_t part;
        if (!(ls >> id >> part)) throw ParseError("malformed partition line", lineno);
        rows.emplace_back(id, part);
    }
    return rows;
}

} // namespace specpart
