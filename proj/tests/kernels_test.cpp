#include "specpart/generators.hpp"
#include "specpart/kernels.hpp"
#include "specpart/laplacian.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace specpart;
namespace k = specpart::kernels;

namespace {

Dense random_block(std::int64_t n, std::int64_t m, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    Dense X(n, m);
    for (double& x : X.data) x = 2.0 * (static_cast<double>(rng() >> 11) * 0x1.0p-53) - 1.0;
    return X;
}

} // namespace

TEST_SUITE("kernels") {

TEST_CASE("spmv_block matches the serial reference exactly") {
    Graph g = generate(GeneratorSpec::stencil3d(9, 9, 9, 27));
    LinearOperator L = build_combinatorial(g);
    Dense X = random_block(g.n(), 5, 2);

    Dense par, ser;
    k::spmv_block(L.matrix, X, par);
    k::spmv_block_serial(L.matrix, X, ser);
    CHECK(par.data == ser.data); // per-row accumulation order is identical
}

TEST_CASE("gram matches the serial reference to round-off and is repeatable") {
    Dense U = random_block(20000, 4, 3);
    Dense V = random_block(20000, 3, 4);

    Dense a = k::gram(U, V);
    Dense b = k::gram(U, V);
    CHECK(a.data == b.data); // chunked reduction: bit-identical across runs

    Dense s = k::gram_serial(U, V);
    for (std::size_t t = 0; t < s.data.size(); ++t)
        CHECK(a.data[t] == doctest::Approx(s.data[t]).epsilon(1e-13));
}

TEST_CASE("mult matches the serial reference exactly") {
    Dense X = random_block(5000, 6, 7);
    Dense C = random_block(6, 4, 8);
    Dense par, ser;
    k::mult(X, C, par);
    k::mult_serial(X, C, ser);
    CHECK(par.data == ser.data);
}

TEST_CASE("mult_sub subtracts the product") {
    Dense X = random_block(100, 3, 1);
    Dense C = random_block(3, 2, 2);
    Dense Y = random_block(100, 2, 3);
    Dense ref = Y;
    Dense XC;
    k::mult_serial(X, C, XC);
    for (std::size_t t = 0; t < ref.data.size(); ++t) ref.data[t] -= XC.data[t];

    k::mult_sub(Y, X, C);
    CHECK(Y.data == ref.data);
}

TEST_CASE("deterministic dot and norm") {
    Dense u = random_block(100000, 1, 5);
    Dense v = random_block(100000, 1, 6);
    const double d1 = k::dot(u.col(0), v.col(0), u.rows);
    const double d2 = k::dot(u.col(0), v.col(0), u.rows);
    CHECK(d1 == d2);

    double serial = 0.0;
    for (std::int64_t i = 0; i < u.rows; ++i) serial += u(i, 0) * v(i, 0);
    CHECK(d1 == doctest::Approx(serial).epsilon(1e-12));

    CHECK(k::norm2(u.col(0), u.rows) == doctest::Approx(std::sqrt(k::dot(u.col(0), u.col(0), u.rows))));
}

TEST_CASE("diag_scale and scale_columns") {
    Dense X = random_block(50, 2, 9);
    std::vector<double> d(50);
    for (int i = 0; i < 50; ++i) d[i] = i + 1.0;
    Dense Y;
    k::diag_scale(d, X, Y);
    for (int i = 0; i < 50; ++i)
        for (int j = 0; j < 2; ++j) CHECK(Y(i, j) == d[i] * X(i, j));

    Dense Z = X;
    k::scale_columns(Z, {2.0, -1.0});
    for (int i = 0; i < 50; ++i) {
        CHECK(Z(i, 0) == 2.0 * X(i, 0));
        CHECK(Z(i, 1) == -X(i, 1));
    }
}

} // TEST_SUITE
