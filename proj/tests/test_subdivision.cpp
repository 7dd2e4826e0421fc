#include <doctest.h>

#include <algorithm>

#include "relcat/families.hpp"
#include "relcat/simplicial.hpp"
#include "relcat/subdivision.hpp"

using namespace relcat;

namespace {

RelPosetPtr simplex(int n, std::vector<ElementPair> marks = {})
{
    return std::make_shared<const RelPoset>(build_simplex(n, marks));
}

std::optional<ElementId> find_chain(const XiPoset& x, const ChainObject& c)
{
    auto it = std::find(x.chains.begin(), x.chains.end(), c);
    if (it == x.chains.end())
        return std::nullopt;
    return static_cast<ElementId>(it - x.chains.begin());
}

bool is_subchain(const ChainObject& a, const ChainObject& b)
{
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

} // namespace

TEST_CASE("subdividing a point gives a point")
{
    for (auto mode : {SubdivisionMode::Terminal, SubdivisionMode::Initial, SubdivisionMode::Double})
        CHECK(subdivide(simplex(0), mode).result->size() == 1);
}

TEST_CASE("double subdivision sizes")
{
    // 3 one-element chains + 2 two-element chains of subsets of {0,1}
    CHECK(subdivide(simplex(1), SubdivisionMode::Double).result->size() == 5);
    // 7 + 12 + 6 chains by length
    CHECK(subdivide(simplex(2), SubdivisionMode::Double).result->size() == 25);
    const auto chains = enumerate_subset_chains(full_mask(2));
    std::array<int, 4> by_length{};
    for (const auto& c : chains)
        ++by_length[c.size()];
    CHECK(by_length[1] == 7);
    CHECK(by_length[2] == 12);
    CHECK(by_length[3] == 6);
}

TEST_CASE("terminal subdivision orders by refinement and marks by last vertex")
{
    auto base = simplex(2, {{1, 2}});
    XiPoset x = subdivide(base, SubdivisionMode::Terminal);
    CHECK(x.result->size() == 7);
    for (ElementId a = 0; a < x.chains.size(); ++a)
        for (ElementId b = 0; b < x.chains.size(); ++b) {
            CHECK(x.result->leq(a, b) == is_subchain(x.chains[a], x.chains[b]));
            if (x.result->leq(a, b))
                CHECK(x.result->marked(a, b) == base->marked(x.chains[a].back(), x.chains[b].back()));
        }
    auto v = vertex_map(x);
    CHECK(v(*find_chain(x, {0, 2})) == 2);
    CHECK(is_relative_map(v));
}

TEST_CASE("initial subdivision reverses the order and marks by first vertex")
{
    auto base = simplex(2, {{0, 1}});
    XiPoset x = subdivide(base, SubdivisionMode::Initial);
    for (ElementId a = 0; a < x.chains.size(); ++a)
        for (ElementId b = 0; b < x.chains.size(); ++b) {
            CHECK(x.result->leq(a, b) == is_subchain(x.chains[b], x.chains[a]));
            if (x.result->leq(a, b))
                CHECK(x.result->marked(a, b) == base->marked(x.chains[a].front(), x.chains[b].front()));
        }
    auto v = vertex_map(x);
    CHECK(v(*find_chain(x, {1, 2})) == 1);
    CHECK(is_relative_map(v));
}

TEST_CASE("underlying poset of the double subdivision is the chain poset of subsets")
{
    for (int n = 0; n <= 3; ++n) {
        XiPoset xi = subdivide(simplex(n), SubdivisionMode::Double);
        SubsetChainPoset full = sd2_region(n, Region::Full, -1, nullptr);
        REQUIRE(xi.result->size() == full.chains.size());
        std::vector<ElementId> f;
        for (ElementId e = 0; e < xi.result->size(); ++e)
            f.push_back(full.index.at(flatten_double(xi, e)));
        CHECK(is_order_isomorphism(*xi.result, *full.poset, f));
    }
}

TEST_CASE("vertex map of the double subdivision is relative for every structure")
{
    for (int n = 1; n <= 2; ++n)
        for (const RelPoset& s : all_relative_structures(n)) {
            XiPoset xi = subdivide(std::make_shared<const RelPoset>(s), SubdivisionMode::Double);
            CHECK(is_relative_map(vertex_map(xi)));
        }
}

TEST_CASE("a map sending a mark to a non-mark is not relative")
{
    XiPoset xi = subdivide(simplex(2, {{0, 1}}), SubdivisionMode::Double);
    auto v = vertex_map(xi);
    CHECK_FALSE(is_relative_map(MonotoneMap(xi.result, simplex(2), v.assignment())));
}

TEST_CASE("region sizes")
{
    CHECK(sd2_region(2, Region::Full, -1, nullptr).chains.size() == 25);
    // 25 minus the 13 chains topped by {0,1,2}
    CHECK(sd2_region(2, Region::Boundary, -1, nullptr).chains.size() == 12);
    // minus the 3 chains topped by the missing face
    CHECK(sd2_region(2, Region::Horn, 1, nullptr).chains.size() == 9);
    for (int n = 1; n <= 3; ++n)
        CHECK(sd2_region(n, Region::Full, -1, nullptr).chains.size() ==
              barycentric_subdivision(full_simplex(n)).complex.total());
}

TEST_CASE("regions are cut out by the top set")
{
    const int n = 3;
    for (const auto& c : enumerate_subset_chains(full_mask(n))) {
        const SubsetMask top = c.back();
        CHECK(in_region(c, n, Region::Full, -1));
        CHECK(in_region(c, n, Region::Boundary, -1) == (top != full_mask(n)));
        for (int k = 0; k <= n; ++k)
            CHECK(in_region(c, n, Region::Horn, k) ==
                  (top != full_mask(n) && top != (full_mask(n) & ~(SubsetMask{1} << k))));
    }
}

TEST_CASE("chain printing")
{
    CHECK(format_chain({0b1, 0b11, 0b111}) == "{0}<{0,1}<{0,1,2}");
    CHECK(phi({0b110, 0b111}) == 1);
}

TEST_CASE("vertex map detects marks on the subdivided horn")
{
    for (int n = 1; n <= 3; ++n)
        for (int k = 0; k <= n; ++k)
            for (const RelPoset& s : all_relative_structures(n)) {
                auto sp = std::make_shared<const RelPoset>(s);
                SubsetChainPoset h = sd2_region(n, Region::Horn, k, sp);
                for (ElementId a = 0; a < h.chains.size(); ++a)
                    for (ElementId b = 0; b < h.chains.size(); ++b)
                        if (h.poset->leq(a, b))
                            CHECK(h.poset->marked(a, b) == s.marked(phi(h.chains[a]), phi(h.chains[b])));
            }
}

TEST_CASE("cone over the empty poset")
{
    KappaPoset k = kappa(Poset::from_relation(0, [](ElementId, ElementId) { return true; }));
    CHECK(k.poset.size() == 1);
    CHECK(k.apex() == 0);
}

TEST_CASE("cone shape")
{
    Poset d = build_simplex(1).poset();
    KappaPoset k = kappa(d);
    CHECK(k.poset.size() == 5);
    for (ElementId x = 0; x < 2; ++x) {
        CHECK(k.poset.leq(k.zero(x), k.one(x)));
        CHECK(k.poset.leq(k.apex(), k.one(x)));
        CHECK_FALSE(k.poset.leq(k.apex(), k.zero(x)));
    }
    CHECK(k.poset.leq(k.zero(0), k.one(1)));
    CHECK_FALSE(k.poset.leq(k.zero(1), k.one(0)));
}

TEST_CASE("transported marks on the cone over the horn")
{
    for (int n = 1; n <= 3; ++n)
        for (int k = 0; k <= n; ++k)
            for (const RelPoset& s : all_relative_structures(n)) {
                KappaHorn kh = kappa_horn(n, k, std::make_shared<const RelPoset>(s));
                const KappaPoset& c = kh.cone;
                for (ElementId d = 0; d < kh.horn.chains.size(); ++d) {
                    CHECK(kh.marked_cone->marked(c.zero(d), c.one(d)));
                    CHECK(kh.marked_cone->marked(c.apex(), c.one(d)) == s.marked(0, phi(kh.horn.chains[d])));
                }
            }
}

TEST_CASE("boundary cone identification holds for every structure")
{
    for (int n = 1; n <= 3; ++n)
        for (const RelPoset& s : all_relative_structures(n)) {
            KappaIdentification id = identify_kappa_boundary(n, std::make_shared<const RelPoset>(s));
            CHECK(is_order_isomorphism(*id.marked_cone, *id.full.poset, id.to_full, true));
            for (ElementId x = 0; x < id.to_full.size(); ++x)
                CHECK(id.from_full[id.to_full[x]] == x);
        }
}

TEST_CASE("retraction example")
{
    Retraction r = retraction_r(2, 0, simplex(2, {{0, 1}}));
    CHECK(r.report.ok());
    for (ElementId t : r.target)
        CHECK(r.map[t] == t);
}

TEST_CASE("retraction fixes its target for all admissible structures")
{
    for (int n = 1; n <= 3; ++n)
        for (int k = 0; k <= n; ++k)
            for (const RelPoset& s : all_relative_structures(n)) {
                if (!admissible(s, n, k, StructureConditions::BothEdges)) {
                    CHECK_THROWS_AS(retraction_r(n, k, std::make_shared<const RelPoset>(s)), std::invalid_argument);
                    continue;
                }
                Retraction r = retraction_r(n, k, std::make_shared<const RelPoset>(s));
                CHECK(r.report.ok());
                for (ElementId t : r.target)
                    CHECK(r.map[t] == t);
            }
}

TEST_CASE("side conditions")
{
    auto top = build_simplex(2, std::vector<ElementPair>{{1, 2}});
    auto none = build_simplex(2);
    CHECK(admissible(top, 2, 2, StructureConditions::TopEdge));
    CHECK_FALSE(admissible(none, 2, 2, StructureConditions::TopEdge));
    CHECK(admissible(none, 2, 1, StructureConditions::TopEdge));
    CHECK_FALSE(admissible(top, 2, 0, StructureConditions::BothEdges));
    CHECK_FALSE(admissible(none, 2, 1, StructureConditions::Strict));
}

TEST_CASE("families inside the subdivided horn")
{
    SubsetChainPoset h = sd2_region(2, Region::Horn, 1, nullptr);
    // the preimage of {j+1..i} is a cosieve in the preimage of {0..i}
    for (int i = 0; i <= 2; ++i) {
        Subposet lower = full_subposet(*h.poset, pi_preimage(h, initial_segment(i)));
        for (int j = -1; j < i; ++j) {
            ElementSet part;
            for (ElementId x : pi_preimage(h, initial_segment(i) & ~initial_segment(j)))
                part.push_back(*lower.local(x));
            CHECK(is_cosieve(*lower.poset, part));
        }
        // and a sieve of the whole horn
        ElementSet rest;
        for (ElementId x = 0; x < h.chains.size(); ++x)
            if (phi(h.chains[x]) > i)
                rest.push_back(x);
        CHECK(is_cosieve(*h.poset, rest));
    }
    CHECK(pi_preimage(h, full_mask(2)).size() == h.chains.size());
    for (const FamilySelector& sel : contractible_selectors(2, 1))
        CHECK(claimed_contractible(2, 1, sel));
}

TEST_CASE("the cofinal inclusion has a maximum in every comma fiber")
{
    const int n = 2;
    for (int k = 0; k <= n; ++k) {
        SubsetChainPoset h = sd2_region(n, Region::Horn, k, nullptr);
        for (int i = 1; i <= n; ++i)
            for (int j = 0; j < i; ++j) {
                ElementSet lower = pi_preimage(h, initial_segment(j));
                ElementSet upper = pi_preimage(h, initial_segment(i));
                ElementSet v = vplus(*h.poset, lower);
                ElementSet b;
                std::set_intersection(upper.begin(), upper.end(), v.begin(), v.end(), std::back_inserter(b));
                Subposet sb = full_subposet(*h.poset, b);
                std::vector<ElementId> local;
                for (ElementId x : lower)
                    local.push_back(*sb.local(x));
                Subposet sl = full_subposet(*h.poset, lower);
                MonotoneMap inc(sl.poset, sb.poset, local);
                for (ElementId d = 0; d < sb.poset->size(); ++d) {
                    Subposet fiber = comma_fiber(inc, d);
                    REQUIRE(fiber.poset->size() > 0);
                    CHECK(maximum(*fiber.poset, all_elements(*fiber.poset)).has_value());
                }
            }
    }
}

TEST_CASE("reductions of the preimages are galois connections")
{
    SubsetChainPoset h = sd2_region(2, Region::Horn, 1, nullptr);
    for (const FamilySelector& sel : contractible_selectors(2, 1)) {
        if (sel.kind != FamilyKind::PiPreimage)
            continue;
        PreimageReduction r = preimage_reduction(h, sel.e);
        for (const GaloisInstance& g : r.fibers)
            CHECK(check_galois_connection(g.lambda, g.rho));
        CHECK(r.d_prime_iso.ok);
    }
}
