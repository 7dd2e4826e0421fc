#include <doctest.h>

#include <set>

#include "relcat/filtration.hpp"

using namespace relcat;

namespace {

// Chains in the grid {0..n} x {0..m} with the product order, counted over
// all subsets of grid points.
std::size_t grid_chains(int n, int m, int r)
{
    const int w = m + 1, points = (n + 1) * (m + 1);
    std::size_t count = 0;
    for (std::uint32_t bits = 1; bits < (1U << points); ++bits) {
        if (__builtin_popcount(bits) != r + 1)
            continue;
        std::vector<std::pair<int, int>> pts;
        for (int p = 0; p < points; ++p)
            if (bits >> p & 1U)
                pts.emplace_back(p / w, p % w);
        std::sort(pts.begin(), pts.end());
        bool chain = true;
        for (std::size_t i = 0; i + 1 < pts.size(); ++i)
            chain = chain && pts[i].second <= pts[i + 1].second;
        count += chain;
    }
    return count;
}

ProductCell cell(std::vector<std::pair<int, int>> cols) { return ProductCell{std::move(cols)}; }

} // namespace

TEST_CASE("cells of the square")
{
    CHECK(product_cells(1, 1, 2).size() == 2);
    CHECK(product_cells(1, 1, 3).empty());
    CHECK(product_cells(2, 1, 4).empty());
}

TEST_CASE("cell counts match chains in the grid")
{
    for (int n = 0; n <= 3; ++n)
        for (int m = 0; m + n <= 4; ++m)
            for (int r = 0; r <= n + m; ++r)
                CHECK(product_cells(n, m, r).size() == grid_chains(n, m, r));
}

TEST_CASE("cell validation")
{
    CHECK_NOTHROW(validate_cell(cell({{0, 0}, {1, 0}, {1, 1}}), 1, 1));
    CHECK_THROWS_AS(validate_cell(cell({{0, 1}, {1, 0}}), 1, 1), std::invalid_argument);
    CHECK_THROWS_AS(validate_cell(cell({{0, 0}, {0, 0}}), 1, 1), std::invalid_argument);
    CHECK_THROWS_AS(validate_cell(cell({{0, 0}, {2, 0}}), 1, 1), std::invalid_argument);
}

TEST_CASE("starting subcomplex membership")
{
    // second coordinates missing m
    CHECK(in_Y0(cell({{0, 0}, {1, 0}, {2, 0}}), 2, 1, 0));
    // a top cell has every coordinate
    CHECK_FALSE(in_Y0(cell({{0, 0}, {1, 0}, {2, 0}, {2, 1}}), 2, 1, 0));
    // first coordinates {0..n} without k, all second coordinates
    CHECK_FALSE(in_Y0(cell({{0, 0}, {2, 0}, {2, 1}}), 2, 1, 1));
    CHECK(in_Y0(cell({{0, 0}, {1, 0}, {1, 1}}), 2, 1, 1));
}

TEST_CASE("reversal is an involution")
{
    for (const auto& c : all_product_cells(2, 2)) {
        CHECK(reverse_cell(reverse_cell(c, 2, 2), 2, 2) == c);
        CHECK_NOTHROW(validate_cell(reverse_cell(c, 2, 2), 2, 2));
    }
}

TEST_CASE("inner horns only for a middle vertex")
{
    FiltrationReport r = filtration_check(2, 1, 1, Side::Left);
    REQUIRE(r.ok);
    CHECK(validate_filtration(r).empty());
    for (const auto& s : r.stages)
        for (const auto& a : s.cells)
            CHECK(a.kind == HornKind::Inner);
    CHECK(r.y0_cells + r.attached + r.missing_faces == r.total_cells);
}

TEST_CASE("special left horns have a marked first edge")
{
    FiltrationReport r = filtration_check(1, 1, 0, Side::Left);
    REQUIRE(r.ok);
    bool special = false;
    for (const auto& s : r.stages)
        for (const auto& a : s.cells)
            if (a.kind == HornKind::SpecialLeft) {
                special = true;
                CHECK(a.marked_edge_ok);
                CHECK(edge_marked(a.cell, 0, 1));
            }
    CHECK(special);
}

TEST_CASE("right case through reversal")
{
    FiltrationReport r = filtration_check(2, 1, 2, Side::Right);
    CHECK(r.ok);
    CHECK(validate_filtration(r).empty());
    CHECK_THROWS_AS(filtration_check(2, 1, 0, Side::Right), std::invalid_argument);
    CHECK_THROWS_AS(filtration_check(2, 1, 2, Side::Left), std::invalid_argument);
}

TEST_CASE("every cell is accounted once for small products")
{
    for (int n = 1; n <= 3; ++n)
        for (int m = 0; n + m <= 4; ++m)
            for (int k = 0; k <= n; ++k)
                for (Side side : {Side::Left, Side::Right}) {
                    if ((side == Side::Left && k == n) || (side == Side::Right && k == 0))
                        continue;
                    FiltrationReport r = filtration_check(n, m, k, side);
                    CAPTURE(n);
                    CAPTURE(m);
                    CAPTURE(k);
                    REQUIRE(r.ok);
                    CHECK(validate_filtration(r).empty());
                    CHECK(r.y0_cells + r.attached + r.missing_faces == r.total_cells);
                    std::set<ProductCell> seen;
                    for (const auto& s : r.stages)
                        for (const auto& a : s.cells) {
                            CHECK(seen.insert(a.cell).second);
                            CHECK(seen.insert(a.missing_face).second);
                        }
                }
}

TEST_CASE("shuffled attachment order still validates")
{
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        FiltrationReport r = filtration_check(2, 2, 1, Side::Left, seed);
        CHECK(r.ok);
        CHECK(validate_filtration(r).empty());
    }
}

TEST_CASE("a corrupted report is caught")
{
    FiltrationReport r = filtration_check(2, 1, 0, Side::Left);
    REQUIRE(r.ok);
    for (auto& s : r.stages)
        if (!s.cells.empty()) {
            std::swap(s.cells.front().cell, s.cells.front().missing_face);
            break;
        }
    CHECK_FALSE(validate_filtration(r).empty());
}
