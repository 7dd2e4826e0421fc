#include <doctest.h>

#include <random>

#include "relcat/relposet.hpp"

using namespace relcat;

namespace {

RelPosetPtr ptr(RelPoset p) { return std::make_shared<const RelPoset>(std::move(p)); }

// Non-identity pairs i < j of the linear poset n.
std::vector<ElementPair> strict_pairs(int n)
{
    std::vector<ElementPair> out;
    for (int i = 0; i <= n; ++i)
        for (int j = i + 1; j <= n; ++j)
            out.emplace_back(i, j);
    return out;
}

// Brute force: subsets of the strict pairs closed under composition.
std::size_t closed_markings(int n)
{
    const auto pairs = strict_pairs(n);
    std::size_t count = 0;
    for (std::uint32_t bits = 0; bits < (1U << pairs.size()); ++bits) {
        auto has = [&](int a, int b) {
            for (std::size_t t = 0; t < pairs.size(); ++t)
                if ((bits >> t & 1U) && pairs[t] == ElementPair(a, b))
                    return true;
            return false;
        };
        bool closed = true;
        for (int a = 0; a <= n && closed; ++a)
            for (int b = a + 1; b <= n && closed; ++b)
                for (int c = b + 1; c <= n && closed; ++c)
                    if (has(a, b) && has(b, c) && !has(a, c))
                        closed = false;
        count += closed;
    }
    return count;
}

} // namespace

TEST_CASE("single marked edge")
{
    const std::vector<ElementPair> g{{0, 1}};
    RelPoset p = build_simplex(1, g);
    CHECK(p.size() == 2);
    CHECK(p.marked(0, 1));
    CHECK(format_structure(p) == "0-1");
}

TEST_CASE("marks are closed under composition")
{
    const std::vector<ElementPair> g{{0, 1}, {1, 2}};
    RelPoset p = build_simplex(2, g);
    CHECK(p.marked(0, 2));
    CHECK(p.closure_is_idempotent());
    CHECK(p.irreducible_marks().size() == 2);
}

TEST_CASE("minimal structure marks only identities")
{
    RelPoset p = build_simplex(2);
    CHECK(p.marked_pairs(false).empty());
    for (ElementId a = 0; a < 3; ++a)
        CHECK(p.marked(a, a));
    CHECK(format_structure(p).empty());
}

TEST_CASE("out of range and reversed marks are rejected")
{
    const std::vector<ElementPair> far{{0, 3}}, back{{2, 1}};
    CHECK_THROWS_AS(build_simplex(2, far), std::invalid_argument);
    CHECK_THROWS_AS(build_simplex(2, back), std::invalid_argument);
    CHECK_THROWS_AS(parse_structure("0-x"), std::invalid_argument);
}

TEST_CASE("structure text round trip")
{
    const auto pairs = parse_structure("we = 0-1, 2-3");
    REQUIRE(pairs.size() == 2);
    CHECK(pairs[0] == ElementPair(0, 1));
    CHECK(pairs[1] == ElementPair(2, 3));
    for (int n = 1; n <= 3; ++n)
        for (const RelPoset& s : all_relative_structures(n)) {
            const auto again = build_simplex(n, parse_structure(format_structure(s)));
            CHECK(again.marks() == s.marks());
        }
}

TEST_CASE("structure enumeration matches brute force over generator subsets")
{
    for (int n = 0; n <= 3; ++n) {
        const auto all = all_relative_structures(n);
        CHECK(all.size() == closed_markings(n));
        for (std::size_t a = 0; a < all.size(); ++a) {
            CHECK(all[a].closure_is_idempotent());
            for (std::size_t b = a + 1; b < all.size(); ++b)
                CHECK_FALSE(all[a].marks() == all[b].marks());
        }
    }
    CHECK(all_relative_structures(2).size() == 7);
}

TEST_CASE("poset construction rejects cycles and non-orders")
{
    const std::vector<ElementPair> cycle{{0, 1}, {1, 0}};
    CHECK_THROWS_AS(Poset::from_generators(2, cycle), std::invalid_argument);
    CHECK_THROWS_AS(Poset::from_relation(2, [](ElementId a, ElementId b) { return a != b; }),
                    std::invalid_argument);
}

TEST_CASE("relative maps")
{
    const std::vector<ElementPair> g{{0, 1}};
    auto marked = ptr(build_simplex(1, g));
    auto plain = ptr(build_simplex(1));
    CHECK(is_relative_map(MonotoneMap::identity(marked)));
    CHECK(is_relative_map(MonotoneMap(plain, marked, {0, 1})));
    CHECK_FALSE(is_relative_map(MonotoneMap(marked, plain, {0, 1})));
    CHECK(is_relative_map(MonotoneMap(marked, plain, {0, 0})));
}

TEST_CASE("product of minimal and maximal markings")
{
    RelPoset lo = RelPoset::minimal(build_simplex(1).poset());
    RelPoset hi = RelPoset::maximal(build_simplex(1).poset());
    RelPoset p = product(lo, hi);
    CHECK(p.size() == 4);
    // element (a, b) has id 2a + b
    std::size_t marks = 0;
    for (ElementId x = 0; x < 4; ++x)
        for (ElementId y = 0; y < 4; ++y)
            if (x != y && p.leq(x, y)) {
                CHECK(p.marked(x, y) == (x / 2 == y / 2));
                marks += p.marked(x, y);
            }
    CHECK(marks == 2);
}

TEST_CASE("cosieves")
{
    auto d = build_simplex(3);
    CHECK(is_cosieve(d, all_elements(d)));
    CHECK(is_cosieve(d, {2, 3}));
    CHECK(is_cosieve(d, {}));
    CHECK_FALSE(is_cosieve(d, {0, 1}));
    CHECK(vplus(d, {1}) == ElementSet{1, 2, 3});
}

TEST_CASE("comma fibers")
{
    auto d = ptr(build_simplex(3));
    auto id = MonotoneMap::identity(d);
    CHECK(comma_fiber(id, 2).to_parent == std::vector<ElementId>{0, 1, 2});
    auto up = MonotoneMap(ptr(build_simplex(1)), d, {2, 3});
    CHECK(comma_fiber(up, 1).poset->size() == 0);
    CHECK(under_fiber(up, 1).poset->size() == 2);
}

TEST_CASE("galois connections")
{
    auto d = ptr(build_simplex(2));
    auto id = MonotoneMap::identity(d);
    CHECK(check_galois_connection(id, id));
    // inclusion of {0,1} with the retraction 2 -> 1: the retraction is a
    // right adjoint of the inclusion, not a left one
    auto small = ptr(build_simplex(1));
    MonotoneMap inc(small, d, {0, 1});
    MonotoneMap ret(d, small, {0, 1, 1});
    CHECK(check_galois_connection(inc, ret));
    CHECK_FALSE(check_galois_connection(ret, inc));
}

TEST_CASE("order isomorphisms")
{
    auto a = build_simplex(2);
    CHECK(is_order_isomorphism(a, a, {0, 1, 2}, true));
    CHECK_FALSE(is_order_isomorphism(a, a, {1, 0, 2}));
    const std::vector<ElementPair> g{{0, 1}};
    CHECK(is_order_isomorphism(a, build_simplex(2, g), {0, 1, 2}));
    CHECK_FALSE(is_order_isomorphism(a, build_simplex(2, g), {0, 1, 2}, true));
}

TEST_CASE("random subposets keep the induced order and marks")
{
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 30; ++trial) {
        const auto all = all_relative_structures(3);
        const RelPoset& s = all[rng() % all.size()];
        ElementSet keep;
        for (ElementId a = 0; a < 4; ++a)
            if (rng() % 2)
                keep.push_back(a);
        Subposet sub = full_subposet(s, keep);
        for (ElementId x = 0; x < keep.size(); ++x) {
            CHECK(sub.local(keep[x]) == x);
            for (ElementId y = 0; y < keep.size(); ++y) {
                CHECK(sub.poset->leq(x, y) == s.leq(keep[x], keep[y]));
                CHECK(sub.poset->marked(x, y) == s.marked(keep[x], keep[y]));
            }
        }
    }
}
