#include <doctest.h>

#include <random>

#include "relcat/chain_complex.hpp"
#include "relcat/linalg.hpp"

using namespace relcat;

namespace {

QMatrix random_matrix(Rng& rng, std::size_t r, std::size_t c, int density)
{
    QMatrix m(r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j)
            if (random_int(rng, 0, 99) < density)
                m.set(i, j, Rational(random_int(rng, -4, 4), random_int(rng, 1, 3)));
    return m;
}

// rank(AB) with A of full column rank r: a matrix of rank exactly r.
QMatrix rank_r_matrix(Rng& rng, std::size_t rows, std::size_t cols, std::size_t r)
{
    QMatrix a(rows, r), b(r, cols);
    for (std::size_t i = 0; i < r; ++i) {
        a.set(i, i, 1);
        b.set(i, i, 1);
    }
    for (std::size_t i = r; i < rows; ++i)
        for (std::size_t j = 0; j < r; ++j)
            a.set(i, j, random_int(rng, -3, 3));
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = r; j < cols; ++j)
            b.set(i, j, random_int(rng, -3, 3));
    QMatrix u = random_unimodular(rng, rows), v = random_unimodular(rng, cols);
    return u * a * b * v;
}

} // namespace

TEST_CASE("basic matrix arithmetic")
{
    QMatrix a = QMatrix::from_rows({{1, 2}, {3, 4}});
    QMatrix b = QMatrix::from_rows({{0, 1}, {1, 0}});
    CHECK(a * b == QMatrix::from_rows({{2, 1}, {4, 3}}));
    CHECK(a + b - b == a);
    CHECK((a - a).is_zero());
    CHECK(a.transpose().at(0, 1) == 3);
    CHECK(a * QMatrix::identity(2) == a);
    CHECK(a.scaled(Rational(1, 2)).at(1, 1) == 2);
    CHECK(hstack(a, b).cols() == 4);
    CHECK(vstack(a, b).rows() == 4);
    CHECK(block_diag(a, b).at(2, 3) == 1);
    CHECK(QMatrix::from_json(a.to_json()) == a);
}

TEST_CASE("builder sums duplicates and drops zeros")
{
    MatrixBuilder b(2, 2);
    b.add(0, 0, 1);
    b.add(0, 0, -1);
    b.add(1, 1, Rational(1, 3));
    b.add(1, 1, Rational(2, 3));
    QMatrix m = b.build();
    CHECK(m.nnz() == 1);
    CHECK(m.at(1, 1) == 1);
}

TEST_CASE("modular arithmetic")
{
    ModP a(5), b = ModP::from_signed(-5);
    CHECK((a + b).is_zero());
    CHECK((a * a.inverse()) == ModP(1));
    CHECK(ModP::from_rational(Rational(1, 2)) * ModP(2) == ModP(1));
}

TEST_CASE("rank of constructed matrices")
{
    Rng rng(7);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t rows = 1 + rng() % 8, cols = 1 + rng() % 8;
        const std::size_t r = rng() % (std::min(rows, cols) + 1);
        QMatrix m = rank_r_matrix(rng, rows, cols, r);
        CHECK(rank_exact(m) == r);
        CHECK(rank(m) == r);
        CHECK(rank_mod_p(m) == r);
        CHECK(rank(m.transpose()) == r);
    }
}

TEST_CASE("kernel basis spans the kernel")
{
    Rng rng(9);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t rows = 1 + rng() % 6, cols = 1 + rng() % 7;
        QMatrix m = random_matrix(rng, rows, cols, 40);
        Kernel k = kernel(m);
        CHECK((m * k.basis).is_zero());
        CHECK(k.basis.cols() + rank_exact(m) == cols);
        CHECK(rank_exact(k.basis) == k.basis.cols());
        // coordinates recover a random kernel vector
        std::vector<Rational> c(k.basis.cols());
        for (auto& x : c)
            x = random_int(rng, -5, 5);
        std::vector<Rational> v = k.basis.apply(c);
        CHECK(k.coordinates(v) == c);
    }
}

TEST_CASE("random sparse ranks agree across methods")
{
    Rng rng(13);
    for (int trial = 0; trial < 60; ++trial) {
        QMatrix m = random_matrix(rng, 1 + rng() % 10, 1 + rng() % 10, 25);
        CHECK(rank(m) == rank_exact(m));
        CHECK(rank_mod_p(m) <= rank_exact(m));
    }
}
