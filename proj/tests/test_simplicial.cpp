#include <doctest.h>

#include <random>

#include "relcat/homology.hpp"
#include "relcat/simplicial.hpp"

using namespace relcat;

namespace {

std::size_t betti(const HomologyReport& h, int d)
{
    for (const auto& x : h.dims)
        if (x.dim == d)
            return x.betti;
    return 0;
}

bool torsion_free(const HomologyReport& h)
{
    for (const auto& x : h.dims)
        if (!x.torsion.empty())
            return false;
    return true;
}

// Reduced homology of S^d.
bool is_sphere(const HomologyReport& h, int d)
{
    if (!torsion_free(h))
        return false;
    for (const auto& x : h.dims)
        if (x.betti != (x.dim == d ? 1U : 0U))
            return false;
    return betti(h, d) == 1;
}

SimComplex twice_subdivided_boundary(int n)
{
    return barycentric_subdivision(barycentric_subdivision(simplex_boundary(n)).complex).complex;
}

} // namespace

TEST_CASE("boundary of an edge")
{
    SimComplex e = full_simplex(1);
    ChainComplexZ c = boundary_matrices(e);
    REQUIRE(c.boundary.size() >= 2);
    const auto& d1 = c.boundary[1];
    CHECK(d1.rows == 2);
    CHECK(d1.cols == 1);
    REQUIRE(d1.columns[0].size() == 2);
    CHECK(d1.columns[0][0].second == -d1.columns[0][1].second);
    CHECK(std::abs(d1.columns[0][0].second) == 1);
}

TEST_CASE("smith normal form examples")
{
    SmithResult id = smith_normal_form(IntMatrix::identity(3));
    CHECK(id.d == IntMatrix::identity(3));
    CHECK(id.rank == 3);

    IntMatrix m = IntMatrix::from_rows({{2, 0}, {0, 3}});
    SmithResult s = smith_normal_form(m);
    CHECK(s.d == IntMatrix::from_rows({{1, 0}, {0, 6}}));
    CHECK(s.u * m * s.v == s.d);

    SmithResult z = smith_normal_form(IntMatrix(2, 3));
    CHECK(z.rank == 0);
    CHECK(z.d == IntMatrix(2, 3));
}

TEST_CASE("smith normal form of random matrices")
{
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t r = 1 + rng() % 5, c = 1 + rng() % 5;
        IntMatrix m(r, c);
        for (auto& x : m.data)
            x = static_cast<long>(rng() % 11) - 5;
        SmithResult s = smith_normal_form(m);
        CHECK(s.u * m * s.v == s.d);
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < c; ++j)
                if (i != j)
                    CHECK(s.d.at(i, j) == 0);
        for (std::size_t i = 0; i + 1 < s.diagonal.size(); ++i)
            CHECK(s.diagonal[i + 1] % s.diagonal[i] == 0);
        // the sparse route agrees on rank and nontrivial factors
        SparseIntMatrix sp{r, c, std::vector<std::vector<std::pair<std::uint32_t, std::int64_t>>>(c)};
        for (std::size_t j = 0; j < c; ++j)
            for (std::size_t i = 0; i < r; ++i)
                if (m.at(i, j) != 0)
                    sp.columns[j].emplace_back(i, m.at(i, j).get_si());
        InvariantFactors f = invariant_factors(sp);
        CHECK(f.rank == s.rank);
        std::vector<mpz_class> nontrivial;
        for (const auto& x : s.diagonal)
            if (abs(x) > 1)
                nontrivial.push_back(abs(x));
        CHECK(f.nontrivial == nontrivial);
    }
}

TEST_CASE("cones are acyclic")
{
    // a poset with a minimum has a contractible nerve
    Poset p = Poset::from_generators(4, std::vector<ElementPair>{{0, 1}, {0, 2}, {1, 3}, {2, 3}});
    CHECK(reduced_homology(nerve(p)).acyclic());
    CHECK(poset_homology(p).acyclic());
}

TEST_CASE("twice subdivided triangle boundary is a circle")
{
    HomologyReport h = reduced_homology(twice_subdivided_boundary(2));
    CHECK(is_sphere(h, 1));
}

TEST_CASE("twice subdivided simplex boundaries are spheres")
{
    for (int n = 1; n <= 4; ++n) {
        SimComplex k = twice_subdivided_boundary(n);
        CHECK(is_sphere(reduced_homology(k), n - 1));
        CHECK(k.euler_characteristic() == (n % 2 == 1 ? 2 : 0));
    }
}

TEST_CASE("real projective plane has torsion")
{
    // six vertex triangulation
    SimComplex rp2 = SimComplex::from_facets(
        6, {{0, 1, 2}, {0, 2, 3}, {0, 3, 4}, {0, 4, 5}, {0, 1, 5}, {1, 2, 4}, {2, 3, 5}, {1, 3, 4}, {1, 3, 5}, {2, 4, 5}});
    HomologyReport h = reduced_homology(rp2);
    CHECK(betti(h, 1) == 0);
    CHECK(betti(h, 2) == 0);
    bool two = false;
    for (const auto& d : h.dims)
        if (d.dim == 1 && d.torsion == std::vector<mpz_class>{2})
            two = true;
    CHECK(two);
}

TEST_CASE("subdivision counts")
{
    // chains of nonempty subsets of {0..n}, counted by a separate script
    const std::size_t chains[] = {1, 5, 25, 149, 1081};
    for (int n = 0; n <= 4; ++n) {
        SimComplex sd = barycentric_subdivision(full_simplex(n)).complex;
        CHECK(sd.count(0) == (1U << (n + 1)) - 1);
        CHECK(sd.total() == chains[n]);
        std::size_t top = 1;
        for (int i = 2; i <= n + 1; ++i)
            top *= i;
        CHECK(sd.count(n) == top);
    }
}

TEST_CASE("nerve of a linear poset is a simplex")
{
    SimComplex k = nerve(build_simplex(3).poset());
    CHECK(k.dimension() == 3);
    CHECK(k.total() == 15);
}

TEST_CASE("from_simplices rejects lists that are not closed")
{
    CHECK_THROWS_AS(SimComplex::from_simplices(2, {{0}, {0, 1}}), std::invalid_argument);
}

TEST_CASE("collapses")
{
    SUBCASE("a simplex collapses")
    {
        auto c = collapse_search(full_simplex(3));
        REQUIRE(c.has_value());
        CHECK(replay_certificate(full_simplex(3), *c).empty());
    }
    SUBCASE("twice subdivided triangle collapses")
    {
        SimComplex k = barycentric_subdivision(barycentric_subdivision(full_simplex(2)).complex).complex;
        auto c = collapse_search(k);
        REQUIRE(c.has_value());
        CHECK(replay_certificate(k, *c).empty());
        CHECK(contractibility_verdict(k).kind == VerdictKind::Collapsible);
    }
    SUBCASE("a triangle boundary has no free face")
    {
        CHECK_FALSE(collapse_search(simplex_boundary(2)).has_value());
    }
    SUBCASE("a tampered certificate is rejected")
    {
        SimComplex k = full_simplex(2);
        auto c = collapse_search(k);
        REQUIRE(c.has_value());
        REQUIRE_FALSE(c->steps.empty());
        c->steps.front().face = {0, 1, 2};
        CHECK_FALSE(replay_certificate(k, *c).empty());
    }
}

TEST_CASE("verdicts")
{
    ContractibilityVerdict v = contractibility_verdict(simplex_boundary(3));
    CHECK(v.kind == VerdictKind::NonAcyclic);
    CHECK(is_sphere(v.homology, 2));
    CHECK(contractibility_verdict(full_simplex(0)).kind == VerdictKind::Collapsible);
}

TEST_CASE("open star removal")
{
    // a square with a diagonal; K is the diagonal's end vertex
    SimComplex l = SimComplex::from_facets(4, {{0, 1, 2}, {0, 2, 3}});
    OpenStarCheck c = open_star_check(l, {1, 0, 0, 0});
    CHECK(c.agree());
    CHECK(c.without_star.acyclic());
}

TEST_CASE("beat points keep homology")
{
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 25; ++trial) {
        const std::size_t n = 3 + rng() % 6;
        std::vector<ElementPair> rel;
        for (ElementId a = 0; a < n; ++a)
            for (ElementId b = a + 1; b < n; ++b)
                if (rng() % 3 == 0)
                    rel.emplace_back(a, b);
        Poset p = Poset::from_generators(n, rel);
        CHECK(poset_homology(p) == reduced_homology(nerve(p)));
    }
}
