#include <doctest.h>

#include "relcat/chain_complex.hpp"

using namespace relcat;

namespace {

ComplexPtr sphere(int degree) { return make_complex(standard_complex(degree, {1}, {})); }

// Q in degree 0 and a disk Q -> Q in degrees 1, 0.
ComplexPtr with_disk()
{
    return make_complex(ChainComplexQ(0, {2, 1}, {QMatrix::from_rows({{0}, {1}})}));
}

Caps small_caps() { return Caps{0, 3, 4}; }

} // namespace

TEST_CASE("complexes")
{
    CHECK_THROWS_AS(ChainComplexQ(0, {1, 1, 1}, {QMatrix::from_rows({{1}}), QMatrix::from_rows({{1}})}),
                    std::logic_error);
    CHECK_THROWS_AS(ChainComplexQ(0, {1, 2}, {QMatrix::from_rows({{1}})}), std::invalid_argument);
    ComplexPtr c = with_disk();
    CHECK(c->betti() == std::vector<std::size_t>{1, 0});
    CHECK_FALSE(c->acyclic());
    CHECK(betti_summary(*c) == "b0=1");
    CHECK(ChainComplexQ::from_json(c->to_json()) == *c);
    CHECK(ChainComplexQ().is_zero());
}

TEST_CASE("quasi-isomorphism examples")
{
    ComplexPtr c = sphere(1);
    CHECK(is_quasi_iso(ChainMap::identity(c)));
    // projection onto the sphere summand kills the disk
    ComplexPtr d = with_disk();
    ComplexPtr s0 = sphere(0);
    ChainMap proj(d, s0, {{0, QMatrix::from_rows({{1, 0}})}});
    CHECK(is_quasi_iso(proj));
    CHECK_FALSE(is_quasi_iso(ChainMap::zero(c, c)));
    QuasiIsoReport r = quasi_iso_report(ChainMap::zero(c, c));
    CHECK_FALSE(r.ok);
    CHECK(r.degree.has_value());
}

TEST_CASE("chain maps must commute")
{
    ComplexPtr d = with_disk();
    ComplexPtr s0 = sphere(0);
    // (x, y) -> y does not commute: the disk boundary hits y
    CHECK_THROWS_AS(ChainMap(d, s0, {{0, QMatrix::from_rows({{0, 1}})}}), std::logic_error);
}

TEST_CASE("factorization of the identity")
{
    ComplexPtr c = with_disk();
    Factorization f = factorize(ChainMap::identity(c));
    for (int k = 0; k <= 1; ++k)
        CHECK(f.middle->dim(k) == 2 * c->dim(k) + c->dim(k + 1));
    CHECK(is_quasi_iso(*f.s));
    CHECK(f.p->degreewise_surjective());
    CHECK(f.p->after(*f.s) == ChainMap::identity(c));
    CHECK(f.r->after(*f.s) == ChainMap::identity(c));
}

TEST_CASE("factorization of zero maps is still surjective")
{
    ComplexPtr a = sphere(0), b = with_disk();
    Factorization f = factorize(ChainMap::zero(a, b));
    CHECK(f.p->degreewise_surjective());
    CHECK(is_quasi_iso(*f.s));
}

TEST_CASE("factorization of random maps")
{
    Rng rng(21);
    for (int trial = 0; trial < 25; ++trial) {
        ComplexPtr a = random_complex(rng, small_caps()), b = random_complex(rng, small_caps());
        ChainMap f = random_chain_map(rng, a, b);
        Factorization fac = factorize(f);
        CHECK(fac.p->after(*fac.s) == f);
        CHECK(is_quasi_iso(*fac.s));
        CHECK(fac.p->degreewise_surjective());
        CHECK(fac.r->after(*fac.s) == ChainMap::identity(a));
    }
}

TEST_CASE("pullbacks")
{
    Rng rng(5);
    SUBCASE("over zero it is the sum")
    {
        ComplexPtr a = random_complex(rng, small_caps()), b = random_complex(rng, small_caps());
        auto zero = make_complex(ChainComplexQ());
        Pullback p = pullback(ChainMap::zero(a, zero), ChainMap::zero(b, zero));
        CHECK(p.object->total_dim() == a->total_dim() + b->total_dim());
        CHECK(same_homology(*p.object, *direct_sum({a, b}).sum));
    }
    SUBCASE("along the identity it is the source")
    {
        for (int trial = 0; trial < 10; ++trial) {
            ComplexPtr a = random_complex(rng, small_caps()), c = random_complex(rng, small_caps());
            ChainMap f = random_chain_map(rng, a, c);
            Pullback p = pullback(f, ChainMap::identity(c));
            CHECK(is_quasi_iso(*p.to_a));
            CHECK(p.object->total_dim() == a->total_dim());
            CHECK(f.after(*p.to_a) == *p.to_b);
        }
    }
    SUBCASE("base change of trivial fibrations")
    {
        for (int trial = 0; trial < 10; ++trial) {
            ComplexPtr a = random_complex(rng, small_caps()), c = random_complex(rng, small_caps());
            ChainMap f = random_chain_map(rng, a, c);
            // a trivial fibration onto c: projection from c plus an acyclic part
            ComplexPtr acyc = random_acyclic(rng, small_caps());
            DirectSum s = direct_sum({c, acyc});
            const ChainMap& p = s.projections[0];
            REQUIRE(p.degreewise_surjective());
            REQUIRE(is_quasi_iso(p));
            Pullback pb = pullback(f, p);
            CHECK(is_quasi_iso(*pb.to_a));
            CHECK(f.after(*pb.to_a) == p.after(*pb.to_b));
        }
    }
    SUBCASE("non surjective legs are rejected")
    {
        ComplexPtr a = sphere(0);
        auto zero = make_complex(ChainComplexQ());
        CHECK_THROWS_AS(pullback(ChainMap::zero(zero, a), ChainMap::zero(zero, a)), std::invalid_argument);
    }
}

TEST_CASE("homotopy pullbacks agree with strict pullbacks of path objects")
{
    Rng rng(8);
    for (int trial = 0; trial < 15; ++trial) {
        ComplexPtr a = random_complex(rng, small_caps()), b = random_complex(rng, small_caps()),
                   c = random_complex(rng, small_caps());
        ChainMap f = random_chain_map(rng, a, c), g = random_chain_map(rng, b, c);
        HomotopyPullback h = homotopy_pullback(f, g);
        Pullback p = homotopy_pullback_by_pullbacks(f, g);
        CHECK(same_homology(*h.object, *p.object));
    }
    // over an isomorphism the homotopy pullback is A
    ComplexPtr a = random_complex(rng, small_caps());
    HomotopyPullback h = homotopy_pullback(ChainMap::identity(a), ChainMap::identity(a));
    CHECK(is_quasi_iso(*h.to_a));
}

TEST_CASE("path object")
{
    Rng rng(2);
    ComplexPtr c = random_complex(rng, small_caps());
    PathObject p = path_object(c);
    CHECK(is_quasi_iso(*p.constant));
    CHECK(p.ev0->after(*p.constant) == ChainMap::identity(c));
    CHECK(p.ev1->after(*p.constant) == ChainMap::identity(c));
}

TEST_CASE("kernel complexes and lifts")
{
    Rng rng(4);
    for (int trial = 0; trial < 15; ++trial) {
        ComplexPtr a = random_complex(rng, small_caps()), b = random_complex(rng, small_caps());
        ChainMap phi = random_chain_map(rng, a, b);
        KernelComplex k = kernel_complex(phi);
        CHECK(phi.after(*k.inclusion) == ChainMap::zero(k.kernel, b));
        CHECK(k.inclusion->degreewise_injective());
        // the inclusion lifts to the identity
        CHECK(k.lift(*k.inclusion) == ChainMap::identity(k.kernel));
    }
}

TEST_CASE("mapping cone detects quasi-isomorphisms")
{
    Rng rng(6);
    for (int trial = 0; trial < 20; ++trial) {
        ComplexPtr a = random_complex(rng, small_caps());
        BasisChange bc = random_basis_change(rng, a);
        CHECK(is_quasi_iso(*bc.forward));
        CHECK(bc.backward->after(*bc.forward) == ChainMap::identity(a));
        CHECK(cone(*bc.forward).acyclic());
    }
}

TEST_CASE("random generators respect caps")
{
    Rng rng(1);
    Caps caps{1, 3, 5};
    for (int trial = 0; trial < 30; ++trial) {
        ComplexPtr c = random_complex(rng, caps);
        for (int k = c->lo(); k <= c->hi(); ++k) {
            if (c->dim(k) == 0)
                continue;
            CHECK(k >= caps.min_degree);
            CHECK(k <= caps.max_degree);
            CHECK(c->dim(k) <= caps.max_dim);
        }
        CHECK(random_acyclic(rng, caps)->acyclic());
    }
}

TEST_CASE("caps parsing")
{
    Caps c = Caps::parse("degree=3,dim=5");
    CHECK(c.max_degree == 3);
    CHECK(c.max_dim == 5);
    CHECK_THROWS_AS(Caps::parse("depth=3"), std::invalid_argument);
}
