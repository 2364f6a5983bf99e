#pragma once

#include "specpart/dense.hpp"
#include "specpart/graph.hpp"
#include "specpart/laplacian.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cstdint>
#include <random>
#include <set>
#include <utility>
#include <vector>

namespace testsupport {

inline Eigen::MatrixXd to_eigen(const specpart::SparseMatrix& m) {
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(m.nrows, m.ncols);
    for (std::int64_t i = 0; i < m.nrows; ++i)
        for (std::int64_t k = m.row_offsets[i]; k < m.row_offsets[i + 1]; ++k)
            d(i, m.col_indices[k]) += m.value_at(k);
    return d;
}

inline Eigen::MatrixXd to_eigen(const specpart::Dense& x) {
    Eigen::MatrixXd d(x.rows, x.cols);
    for (std::int64_t j = 0; j < x.cols; ++j)
        for (std::int64_t i = 0; i < x.rows; ++i) d(i, j) = x(i, j);
    return d;
}

// Independent dense oracle for the smallest eigenvalues of a standard
// symmetric problem.
inline std::vector<double> oracle_smallest_eigenvalues(const specpart::SparseMatrix& m, int count) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(to_eigen(m));
    std::vector<double> out(count);
    for (int i = 0; i < count; ++i) out[i] = es.eigenvalues()(i);
    return out;
}

// Oracle for the generalized pencil A x = theta B x with B SPD.
inline std::vector<double> oracle_smallest_generalized(const specpart::SparseMatrix& a,
                                                       const specpart::SparseMatrix& b, int count) {
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(to_eigen(a), to_eigen(b));
    std::vector<double> out(count);
    for (int i = 0; i < count; ++i) out[i] = es.eigenvalues()(i);
    return out;
}

// Connected random graph: a random spanning tree plus `extra` random edges.
inline specpart::Graph random_connected_graph(std::int64_t n, std::int64_t extra,
                                              std::mt19937_64& rng) {
    std::vector<std::int64_t> order(n);
    for (std::int64_t i = 0; i < n; ++i) order[i] = i;
    std::shuffle(order.begin(), order.end(), rng);

    std::set<std::pair<std::int32_t, std::int32_t>> edge_set;
    auto add = [&](std::int64_t u, std::int64_t v) {
        if (u == v) return;
        std::int32_t a = static_cast<std::int32_t>(u), b = static_cast<std::int32_t>(v);
        if (a > b) std::swap(a, b);
        edge_set.insert({a, b});
    };

    for (std::int64_t i = 1; i < n; ++i) add(order[i], order[rng() % i]);
    for (std::int64_t e = 0; e < extra; ++e) add(rng() % n, rng() % n);

    std::vector<std::pair<std::int32_t, std::int32_t>> edges(edge_set.begin(), edge_set.end());
    return specpart::graph_from_edges(n, edges);
}

inline std::vector<std::int32_t> random_bipartition(std::int64_t n, std::mt19937_64& rng) {
    std::vector<std::int32_t> part(n);
    for (auto& p : part) p = static_cast<std::int32_t>(rng() % 2);
    return part;
}

} // namespace testsupport
