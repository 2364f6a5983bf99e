#include "specpart/errors.hpp"
#include "specpart/graph.hpp"
#include "specpart/laplacian.hpp"
#include "specpart/sparse.hpp"

#include "test_support.hpp"

#include <doctest.h>

#include <sstream>

using namespace specpart;

namespace {

SparseMatrix parse_text(const std::string& text) {
    std::istringstream in(text);
    return parse_matrix_market(in);
}

Graph triangle() { return graph_from_edges(3, {{0, 1}, {1, 2}, {0, 2}}); }

} // namespace

TEST_SUITE("graph") {

TEST_CASE("matrix market pattern general") {
    SparseMatrix m = parse_text("%%MatrixMarket matrix coordinate pattern general\n"
                                "3 3 2\n"
                                "2 1\n"
                                "3 2\n");
    CHECK(m.nrows == 3);
    CHECK(m.ncols == 3);
    CHECK(m.nnz() == 2);
    CHECK_FALSE(m.has_values());
    // stored entries at (1,0) and (2,1), 0-based
    CHECK(m.row_offsets == std::vector<std::int64_t>{0, 0, 1, 2});
    CHECK(m.col_indices == std::vector<std::int32_t>{0, 1});
}

TEST_CASE("matrix market symmetric expansion") {
    SparseMatrix m = parse_text("%%MatrixMarket matrix coordinate real symmetric\n"
                                "2 2 1\n"
                                "2 1 5.0\n");
    CHECK(m.nnz() == 2);
    REQUIRE(m.has_values());
    CHECK(m.col_indices == std::vector<std::int32_t>{1, 0});
    CHECK(m.values == std::vector<double>{5.0, 5.0});
}

TEST_CASE("matrix market array format rejected") {
    CHECK_THROWS_AS(parse_text("%%MatrixMarket matrix array real general\n3 3\n1.0\n"), ParseError);
}

TEST_CASE("matrix market malformed banner names line 1") {
    try {
        parse_text("%%NotMatrixMarket whatever\n");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 1);
    }
}

TEST_CASE("matrix market out-of-range index names its line") {
    try {
        parse_text("%%MatrixMarket matrix coordinate pattern general\n2 2 1\n3 1\n");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 3);
    }
}

TEST_CASE("matrix market truncated entry list") {
    CHECK_THROWS_AS(parse_text("%%MatrixMarket matrix coordinate pattern general\n3 3 2\n2 1\n"),
                    ParseError);
}

TEST_CASE("matrix market duplicates: summed for real, deduplicated for pattern") {
    SparseMatrix real = parse_text("%%MatrixMarket matrix coordinate real general\n"
                                   "2 2 2\n1 2 1.5\n1 2 2.0\n");
    CHECK(real.nnz() == 1);
    CHECK(real.values[0] == doctest::Approx(3.5));

    SparseMatrix pat = parse_text("%%MatrixMarket matrix coordinate pattern general\n"
                                  "2 2 2\n1 2\n1 2\n");
    CHECK(pat.nnz() == 1);
}

TEST_CASE("matrix market keeps explicit zeros as structure") {
    SparseMatrix m = parse_text("%%MatrixMarket matrix coordinate real general\n"
                                "2 2 1\n1 2 0.0\n");
    CHECK(m.nnz() == 1);
    Graph g = symmetrize(m);
    CHECK(g.edge_count() == 1);
}

TEST_CASE("symmetrize single directed entry") {
    std::vector<Triplet> t{{0, 1, 1.0}};
    Graph g = symmetrize(from_triplets(2, 2, t));
    g.validate();
    CHECK(g.n() == 2);
    CHECK(g.edge_count() == 1);
    CHECK(g.degree(0) == 1);
    CHECK(g.degree(1) == 1);
}

TEST_CASE("symmetrize is idempotent on a symmetric triangle") {
    std::vector<Triplet> t{{0, 1, 1}, {1, 0, 1}, {1, 2, 1}, {2, 1, 1}, {0, 2, 1}, {2, 0, 1}};
    Graph g = symmetrize(from_triplets(3, 3, t));
    g.validate();
    CHECK(g.edge_count() == 3);
}

TEST_CASE("symmetrize zero matrix") {
    Graph g = symmetrize(from_triplets(3, 3, {}));
    CHECK(g.n() == 3);
    CHECK(g.edge_count() == 0);
}

TEST_CASE("symmetrize drops diagonal entries") {
    std::vector<Triplet> t{{0, 0, 1}, {1, 1, 1}, {0, 1, 1}};
    Graph g = symmetrize(from_triplets(2, 2, t));
    g.validate(); // validate() rejects self-loops
    CHECK(g.edge_count() == 1);
}

TEST_CASE("symmetrize rejects non-square input") {
    CHECK_THROWS(symmetrize(from_triplets(2, 3, {})));
}

TEST_CASE("largest component picks the bigger side") {
    // component {0,1,2} (path) and component {3,4} (edge)
    Graph g = graph_from_edges(5, {{0, 1}, {1, 2}, {3, 4}});
    auto [sub, ids] = largest_connected_component(g);
    CHECK(sub.n() == 3);
    CHECK(ids == std::vector<std::int64_t>{0, 1, 2});
}

TEST_CASE("largest component of a connected graph is the identity") {
    Graph g = triangle();
    auto [sub, ids] = largest_connected_component(g);
    CHECK(sub.n() == 3);
    CHECK(ids == std::vector<std::int64_t>{0, 1, 2});
    CHECK(sub.adjacency.col_indices == g.adjacency.col_indices);
}

TEST_CASE("largest component tie goes to the smallest original id") {
    // two components of size 2: {1,3} and {0,2}; {0,2} holds vertex 0
    Graph g = graph_from_edges(4, {{1, 3}, {0, 2}});
    auto [sub, ids] = largest_connected_component(g);
    CHECK(sub.n() == 2);
    CHECK(ids == std::vector<std::int64_t>{0, 2});
}

TEST_CASE("largest component output is connected and no discarded component is larger") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 20; ++trial) {
        // a few islands of random sizes
        const std::int64_t n = 30;
        std::vector<std::pair<std::int32_t, std::int32_t>> edges;
        std::int64_t start = 0;
        std::vector<std::int64_t> sizes;
        while (start < n) {
            const std::int64_t len = 1 + static_cast<std::int64_t>(rng() % 9);
            const std::int64_t end = std::min(n, start + len);
            for (std::int64_t v = start; v + 1 < end; ++v)
                edges.push_back({static_cast<std::int32_t>(v), static_cast<std::int32_t>(v + 1)});
            sizes.push_back(end - start);
            start = end;
        }
        Graph g = graph_from_edges(n, edges);
        auto [sub, ids] = largest_connected_component(g);

        for (std::int64_t s : sizes) CHECK(sub.n() >= s);

        // traversal must reach every vertex of the extracted subgraph
        std::vector<char> seen(sub.n(), 0);
        std::vector<std::int64_t> stack{0};
        seen[0] = 1;
        std::int64_t visited = 1;
        while (!stack.empty()) {
            const std::int64_t v = stack.back();
            stack.pop_back();
            for (std::int64_t k = sub.adjacency.row_offsets[v]; k < sub.adjacency.row_offsets[v + 1];
                 ++k) {
                const std::int32_t u = sub.adjacency.col_indices[k];
                if (!seen[u]) {
                    seen[u] = 1;
                    ++visited;
                    stack.push_back(u);
                }
            }
        }
        CHECK(visited == sub.n());
    }
}

TEST_CASE("classify complete graph as regular") {
    Graph k4 = graph_from_edges(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}});
    GraphKind kind = classify(k4);
    CHECK(kind.max_degree == 3);
    CHECK(kind.avg_degree == doctest::Approx(3.0));
    CHECK(kind.ratio == doctest::Approx(1.0));
    CHECK(kind.kind == Regularity::Regular);
}

TEST_CASE("classify by the ratio threshold") {
    // hub of degree 12 + 12 leaves + a chain keeps avg low; ratio = 12 / avg
    std::vector<std::pair<std::int32_t, std::int32_t>> edges;
    for (int leaf = 1; leaf <= 12; ++leaf) edges.push_back({0, static_cast<std::int32_t>(leaf)});
    Graph star = graph_from_edges(13, edges);
    GraphKind k_star = classify(star);
    // degrees: 12, then 1 x12; avg = 24/13, ratio = 6.5 <= 10
    CHECK(k_star.ratio == doctest::Approx(6.5));
    CHECK(k_star.kind == Regularity::Regular);

    // star with 162 leaves: ratio = 162 / (324/163) = 81.5 > 10
    edges.clear();
    for (int leaf = 1; leaf <= 162; ++leaf) edges.push_back({0, static_cast<std::int32_t>(leaf)});
    GraphKind k_big = classify(graph_from_edges(163, edges));
    CHECK(k_big.ratio == doctest::Approx(81.5));
    CHECK(k_big.kind == Regularity::Irregular);
}

TEST_CASE("cutsize on the triangle") {
    Graph g = triangle();
    std::vector<std::int32_t> part{0, 1, 1};
    CHECK(cutsize(g, part) == doctest::Approx(2.0));
    CHECK(cutsize(g, part, /*doubled=*/true) == doctest::Approx(4.0));
}

TEST_CASE("cutsize is zero with a single part") {
    Graph g = triangle();
    std::vector<std::int32_t> part{0, 0, 0};
    CHECK(cutsize(g, part) == 0.0);
}

TEST_CASE("cutsize on the 4-cycle") {
    Graph g = graph_from_edges(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}});
    std::vector<std::int32_t> part{0, 0, 1, 1};
    CHECK(cutsize(g, part) == doctest::Approx(2.0));
}

TEST_CASE("cutsize rejects a wrong-length assignment") {
    Graph g = triangle();
    std::vector<std::int32_t> part{0, 1};
    CHECK_THROWS(cutsize(g, part));
}

TEST_CASE("imbalance examples") {
    CHECK(imbalance(std::vector<double>{4, 4, 4, 4}) == doctest::Approx(1.0));
    CHECK(imbalance(std::vector<double>{5, 3}) == doctest::Approx(1.25));
    CHECK(imbalance(std::vector<double>{1, 1, 1}) == doctest::Approx(1.0));
    CHECK_THROWS(imbalance(std::vector<double>{}));
}

TEST_CASE("cut identity: quarter of x^T L x equals the cut count") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 40; ++trial) {
        const std::int64_t n = 2 + rng() % 63;
        Graph g = testsupport::random_connected_graph(n, rng() % (2 * n), rng);
        LinearOperator L = build_combinatorial(g);

        std::vector<std::int32_t> part = testsupport::random_bipartition(n, rng);
        Dense x(n, 1);
        for (std::int64_t i = 0; i < n; ++i) x(i, 0) = part[i] == 0 ? 1.0 : -1.0;

        Dense Lx = apply_block(L, x);
        double quad = 0.0;
        for (std::int64_t i = 0; i < n; ++i) quad += x(i, 0) * Lx(i, 0);

        // integer arithmetic throughout: exact equality required
        CHECK(quad / 4.0 == cutsize(g, part));
    }
}

TEST_CASE("symmetrize then classify is deterministic") {
    const std::string text = "%%MatrixMarket matrix coordinate pattern general\n"
                             "5 5 4\n2 1\n3 1\n4 2\n5 4\n";
    GraphKind a = classify(symmetrize(parse_text(text)));
    GraphKind b = classify(symmetrize(parse_text(text)));
    CHECK(a.kind == b.kind);
    CHECK(a.ratio == b.ratio);
    CHECK(a.max_degree == b.max_degree);
}

TEST_CASE("partition file round trip") {
    std::vector<std::int32_t> assignment{2, 0, 1};
    std::vector<std::int64_t> ids{10, 11, 15};
    std::ostringstream out;
    write_partition(out, assignment, ids);
    CHECK(out.str() == "10 2\n11 0\n15 1\n");

    std::istringstream in(out.str());
    auto rows = read_partition(in);
    REQUIRE(rows.size() == 3);
    CHECK(rows[2] == std::pair<std::int64_t, std::int32_t>{15, 1});
}

TEST_CASE("sparse matrix structural validation") {
    SparseMatrix ok;
    ok.nrows = ok.ncols = 2;
    ok.row_offsets = {0, 1, 2};
    ok.col_indices = {1, 0};
    ok.validate();

    SparseMatrix bad_index = ok;
    bad_index.col_indices = {1, 5};
    CHECK_THROWS(bad_index.validate());

    SparseMatrix bad_offsets = ok;
    bad_offsets.row_offsets = {0, 2, 1};
    CHECK_THROWS(bad_offsets.validate());

    SparseMatrix dup = ok;
    dup.nrows = 1;
    dup.ncols = 2;
    dup.row_offsets = {0, 2};
    dup.col_indices = {1, 1}; // not strictly increasing
    CHECK_THROWS(dup.validate());
}

TEST_CASE("make_partition validates and computes metrics") {
    Graph g = graph_from_edges(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}});
    Partition p = make_partition(g, {0, 0, 1, 1}, 2);
    CHECK(p.part_weights == std::vector<double>{2.0, 2.0});
    CHECK(p.cutsize == doctest::Approx(2.0));
    CHECK(p.imbalance == doctest::Approx(1.0));

    CHECK_THROWS(make_partition(g, {0, 0, 0, 0}, 2)); // empty part
    CHECK_THROWS(make_partition(g, {0, 0, 2, 1}, 2)); // out of range
}

} // TEST_SUITE
