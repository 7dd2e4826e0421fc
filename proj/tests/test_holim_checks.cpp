#include <doctest.h>

#include "relcat/holim_checks.hpp"

using namespace relcat;

namespace {

RelPosetPtr ptr(RelPoset p) { return std::make_shared<const RelPoset>(std::move(p)); }

Caps caps() { return Caps{}; }

DiagramPtr constant_on_simplex(int n, const RelPosetPtr& s)
{
    Rng rng(3);
    ComplexPtr c = random_complex(rng, caps());
    std::map<ElementPair, ChainMap> arrows;
    for (int i = 0; i < n; ++i)
        arrows.emplace(ElementPair(i, i + 1), ChainMap::identity(c));
    return std::make_shared<const Diagram>(s, std::vector<ComplexPtr>(n + 1, c), std::move(arrows));
}

} // namespace

TEST_CASE("holim over the horn for constant diagrams")
{
    for (int k = 0; k <= 2; ++k) {
        auto s = ptr(build_simplex(2, std::vector<ElementPair>{{1, 2}}));
        SubsetChainPoset horn = sd2_region(2, Region::Horn, k, s);
        DiagramPtr f = compose_with_phi(*constant_on_simplex(2, s), horn, true);
        HolimPropReport r = check_holim_prop(horn, f);
        CHECK(r.ok);
        CHECK(all_ok(r.steps));
    }
}

TEST_CASE("holim over the horn for random relative diagrams at n = 2")
{
    for (int k = 0; k <= 2; ++k)
        for (const RelPoset& s : all_relative_structures(2)) {
            if (!admissible(s, 2, k, StructureConditions::TopEdge))
                continue;
            SubsetChainPoset horn = sd2_region(2, Region::Horn, k, ptr(s));
            for (std::uint64_t seed = 1; seed <= 3; ++seed) {
                RelativeDiagram rd = gen_relative_diagram(horn, seed, caps());
                HolimPropReport r = check_holim_prop(horn, rd.diagram);
                CAPTURE(format_structure(s));
                CAPTURE(seed);
                CHECK(r.ok);
                CHECK(r.main.ok);
                CHECK(r.holim_homology == r.target_homology);
            }
        }
}

TEST_CASE("holim check preconditions")
{
    auto plain = ptr(build_simplex(2));
    SubsetChainPoset horn = sd2_region(2, Region::Horn, 2, plain);
    RelativeDiagram rd = gen_relative_diagram(horn, 1, caps());
    CHECK_THROWS_AS(check_holim_prop(horn, rd.diagram), std::invalid_argument);
    SubsetChainPoset small = sd2_region(1, Region::Horn, 0, ptr(build_simplex(1)));
    CHECK_THROWS_AS(check_holim_prop(small, gen_relative_diagram(small, 1, caps()).diagram), std::invalid_argument);
}

TEST_CASE("reports are deterministic")
{
    auto s = ptr(build_simplex(2, std::vector<ElementPair>{{0, 1}}));
    SubsetChainPoset horn = sd2_region(2, Region::Horn, 1, s);
    auto a = check_holim_prop(horn, gen_relative_diagram(horn, 4, caps()).diagram).to_json();
    auto b = check_holim_prop(horn, gen_relative_diagram(horn, 4, caps()).diagram).to_json();
    CHECK(a == b);
}

TEST_CASE("pie decomposition at n = 2")
{
    for (int k = 0; k <= 2; ++k) {
        auto s = ptr(build_simplex(2, std::vector<ElementPair>{{1, 2}}));
        SubsetChainPoset horn = sd2_region(2, Region::Horn, k, s);
        RelativeDiagram rd = gen_relative_diagram(horn, 6, caps());
        for (int i = 1; i <= 2; ++i)
            for (int j = 0; j < i; ++j) {
                DecompositionReport r = check_decomposition(horn, rd.diagram, i, j, true);
                CAPTURE(k);
                CAPTURE(i);
                CAPTURE(j);
                CHECK(r.ok);
                CHECK(r.holim_homology == r.pullback_homology);
            }
        CHECK_THROWS_AS(check_decomposition(horn, rd.diagram, 1, 1, false), std::invalid_argument);
        CHECK_THROWS_AS(check_decomposition(horn, rd.diagram, 3, 0, false), std::invalid_argument);
    }
}

TEST_CASE("holim over contractible indexes")
{
    for (const NamedIndex& idx : contractible_indexes())
        for (std::uint64_t seed = 1; seed <= 2; ++seed) {
            ContractibleHolimReport r = check_contractible_holim(idx, seed, caps());
            CAPTURE(idx.name);
            CHECK(r.ok);
        }
}

TEST_CASE("extension over the cone at n = 2")
{
    ExtensionOptions opts;
    opts.full_functoriality = true;
    for (int k = 0; k <= 2; ++k)
        for (const RelPoset& s : all_relative_structures(2)) {
            if (!admissible(s, 2, k, StructureConditions::TopEdge))
                continue;
            KappaHorn kh = kappa_horn(2, k, ptr(s));
            ExtensionReport r = check_extension(kh, 2, caps(), opts);
            CAPTURE(format_structure(s));
            CAPTURE(k);
            CHECK(r.ok);
            CHECK(r.apex.marked <= r.apex.quasi_isos);
        }
}

TEST_CASE("extension check rejects wrong vertex classes")
{
    auto s = ptr(build_simplex(2, std::vector<ElementPair>{{0, 1}}));
    KappaHorn kh = kappa_horn(2, 1, s);
    RelativeDiagram rd = gen_relative_diagram(kh.horn, 1, caps());
    ExtensionReport good = check_extension(kh, rd.diagram, rd.classes);
    CHECK(good.ok);
    ExtensionReport bad = check_extension(kh, rd.diagram, {0, 1, 2});
    CHECK_FALSE(bad.ok);
}

TEST_CASE("lifting instances for the last horn")
{
    for (const RelPoset& s : all_relative_structures(2)) {
        if (!admissible(s, 2, 2, StructureConditions::TopEdge))
            continue;
        ThomasonReport r = check_thomason(2, ptr(s), 5, caps(), ExtensionOptions{true, 400});
        CHECK(r.ok);
        CHECK(r.nerve_verdict != "non-acyclic");
    }
}

TEST_CASE("fibration category axioms")
{
    AxiomsReport r = check_axioms(3, 30, caps());
    CHECK(r.ok);
    CHECK(r.six_hypothesis_hits > 0);
    CHECK(check_axioms(3, 30, caps()).to_json() == r.to_json());
}
