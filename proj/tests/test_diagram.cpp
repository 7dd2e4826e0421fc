#include <doctest.h>

#include "relcat/diagram.hpp"
#include "relcat/families.hpp"
#include "relcat/generator.hpp"
#include "relcat/homology.hpp"
#include "relcat/simplicial.hpp"

using namespace relcat;

namespace {

RelPosetPtr ptr(RelPoset p) { return std::make_shared<const RelPoset>(std::move(p)); }

DiagramPtr constant(const RelPosetPtr& index, const ComplexPtr& c)
{
    std::map<ElementPair, ChainMap> arrows;
    for (auto cover : index->poset().cover_pairs())
        arrows.emplace(cover, ChainMap::identity(c));
    return std::make_shared<const Diagram>(index, std::vector<ComplexPtr>(index->size(), c), std::move(arrows));
}

ComplexPtr point_complex() { return make_complex(standard_complex(0, {1}, {})); }

Caps caps() { return Caps{0, 3, 4}; }

} // namespace

TEST_CASE("diagram construction checks covers")
{
    auto index = ptr(build_simplex(1));
    auto c = point_complex();
    CHECK_THROWS_AS(Diagram(index, {c, c}, {}), std::invalid_argument);
    CHECK_NOTHROW(constant(index, c)->validate());
}

TEST_CASE("functoriality failures are reported")
{
    // square 0 < 1, 2 < 3 with one side zero
    auto index = ptr(RelPoset::minimal(Poset::from_generators(4, std::vector<ElementPair>{{0, 1}, {0, 2}, {1, 3}, {2, 3}})));
    auto c = point_complex();
    std::map<ElementPair, ChainMap> arrows;
    for (auto cover : index->poset().cover_pairs())
        arrows.emplace(cover, ChainMap::identity(c));
    arrows.at({2, 3}) = ChainMap::zero(c, c);
    Diagram d(index, {c, c, c, c}, arrows);
    CHECK_FALSE(d.functoriality_error().empty());
    CHECK_THROWS_AS(d.validate(), std::logic_error);
}

TEST_CASE("relativity failures are reported")
{
    auto index = ptr(build_simplex(1, std::vector<ElementPair>{{0, 1}}));
    auto c = point_complex();
    Diagram d(index, {c, c}, {{{0, 1}, ChainMap::zero(c, c)}}, true);
    CHECK(d.functoriality_error().empty());
    CHECK_FALSE(d.relativity_error().empty());
    CHECK_THROWS_AS(d.validate(), std::logic_error);
}

TEST_CASE("diagram json round trip")
{
    auto horn = sd2_region(2, Region::Horn, 1, ptr(build_simplex(2, std::vector<ElementPair>{{0, 1}})));
    RelativeDiagram rd = gen_relative_diagram(horn, 3, caps());
    Diagram back = Diagram::from_json(rd.diagram->to_json());
    CHECK(back.to_json() == rd.diagram->to_json());
}

TEST_CASE("inverse structure")
{
    Poset p = build_simplex(3).poset();
    InverseStructure inv = InverseStructure::colength(p);
    CHECK(inv.validation_error(p).empty());
    CHECK(inv.processing_order() == std::vector<ElementId>{3, 2, 1, 0});
    InverseStructure bad{{0, 1, 2, 3}};
    CHECK_FALSE(bad.validation_error(p).empty());
}

TEST_CASE("one element index")
{
    auto index = ptr(build_simplex(0));
    Rng rng(1);
    auto c = random_complex(rng, caps());
    auto f = constant(index, c);
    Holim h = holim(f, InverseStructure::colength(index->poset()));
    CHECK(is_quasi_iso(h.canonical(0)));
    CHECK(same_homology(*h.object(), *c));
}

TEST_CASE("constant diagram on an arrow")
{
    auto index = ptr(build_simplex(1));
    Rng rng(2);
    auto f = constant(index, random_complex(rng, caps()));
    ReedyReplacement r = reedy_replace(f, InverseStructure::colength(index->poset()), true);
    CHECK(reedy_error(r).empty());
    for (const auto& m : r.matching_maps)
        CHECK(m.degreewise_surjective());
    for (const auto& e : r.eta)
        CHECK(is_quasi_iso(e));
}

TEST_CASE("chain model agrees with the kernel limit of the replacement")
{
    for (const NamedIndex& idx : contractible_indexes())
        for (std::uint64_t seed = 1; seed <= 2; ++seed) {
            CAPTURE(idx.name);
            DiagramPtr f = gen_quasi_iso_diagram(idx.index, seed, caps());
            ReedyReplacement r = reedy_replace(f, InverseStructure::colength(idx.index->poset()), true);
            CHECK(reedy_error(r).empty());
            Limit lim = limit(*r.replaced);
            ChainModel model(f, all_elements(*idx.index));
            CHECK(lim.object->total_dim() == model.complex()->total_dim());
            CHECK(same_homology(*lim.object, *model.complex()));
        }
}

TEST_CASE("holim over an index with a minimum is the value there")
{
    auto horn = sd2_region(2, Region::Horn, 0, ptr(build_simplex(2)));
    RelativeDiagram rd = gen_relative_diagram(horn, 5, caps());
    // the preimage of {0} has a minimum after adding it: take the up-set of an element
    for (ElementId u = 0; u < horn.chains.size(); ++u) {
        ElementSet up;
        for (ElementId v = 0; v < horn.chains.size(); ++v)
            if (horn.poset->leq(u, v))
                up.push_back(v);
        ChainModel m(rd.diagram, up);
        CHECK(is_quasi_iso(m.coaugmentation(u)));
        CHECK(is_quasi_iso(m.evaluation(u)));
    }
}

TEST_CASE("restriction of chain models is compatible with evaluation")
{
    auto horn = sd2_region(2, Region::Horn, 1, ptr(build_simplex(2)));
    RelativeDiagram rd = gen_relative_diagram(horn, 2, caps());
    ChainModel big(rd.diagram, all_elements(*horn.poset));
    ElementSet part = pi_preimage(horn, 0b011);
    ChainModel small(rd.diagram, part);
    ChainMap res = big.restriction(small);
    for (ElementId d : part)
        CHECK(small.evaluation(d).after(res) == big.evaluation(d));
    CHECK(ChainModel(rd.diagram, {}).complex()->is_zero());
}

TEST_CASE("cone extension on the subdivided horn")
{
    auto s = ptr(build_simplex(2, std::vector<ElementPair>{{0, 1}}));
    KappaHorn kh = kappa_horn(2, 1, s);
    REQUIRE(kh.horn.chains.size() == 9);
    RelativeDiagram rd = gen_relative_diagram(kh.horn, 4, caps());
    Extension e = extend_to_kappa(rd.diagram, InverseStructure::colength(kh.horn.poset->poset()), kh.marked_cone);
    CHECK(e.g->functoriality_error().empty());
    for (ElementId d = 0; d < 9; ++d) {
        CHECK(is_quasi_iso(e.g->arrow(e.cone.zero(d), e.cone.one(d))));
        CHECK(is_quasi_iso(e.g->arrow(e.cone.apex(), e.cone.one(d))) == s->marked(0, phi(kh.horn.chains[d])));
    }
}

// ------------------------------------------------ generator

TEST_CASE("saturated classes")
{
    auto classes = [](int n, std::vector<ElementPair> marks) { return saturated_classes(build_simplex(n, marks)); };
    CHECK(classes(2, {}) == std::vector<int>{0, 1, 2});
    auto c = classes(3, {{0, 1}});
    CHECK(c[0] == c[1]);
    CHECK(c[1] != c[2]);
    CHECK(c[2] != c[3]);
    // two-out-of-six merges the overlapping pairs
    c = classes(3, {{0, 2}, {1, 3}});
    CHECK(std::count(c.begin(), c.end(), c[0]) == 4);
}

TEST_CASE("sharp diagrams on the linear poset")
{
    for (int n = 1; n <= 3; ++n)
        for (const RelPoset& s : all_relative_structures(n)) {
            auto sp = ptr(s);
            const auto classes = saturated_classes(s);
            DiagramPtr g = gen_sharp_linear(sp, 9, caps());
            CHECK(g->functoriality_error().empty());
            for (ElementId i = 0; i <= static_cast<ElementId>(n); ++i)
                for (ElementId j = i; j <= static_cast<ElementId>(n); ++j)
                    CHECK(is_quasi_iso(g->arrow(i, j)) == (classes[i] == classes[j]));
        }
}

TEST_CASE("generator is deterministic in the seed")
{
    auto horn = sd2_region(2, Region::Horn, 2, ptr(build_simplex(2, std::vector<ElementPair>{{1, 2}})));
    auto a = gen_relative_diagram(horn, 17, caps()), b = gen_relative_diagram(horn, 17, caps());
    CHECK(a.diagram->to_json() == b.diagram->to_json());
    CHECK(a.perturbed == b.perturbed);
    auto c = gen_relative_diagram(horn, 18, caps());
    CHECK(a.diagram->to_json() != c.diagram->to_json());
}

TEST_CASE("relative diagrams are relative")
{
    for (int k = 0; k <= 2; ++k)
        for (const RelPoset& s : all_relative_structures(2)) {
            auto horn = sd2_region(2, Region::Horn, k, ptr(s));
            for (std::uint64_t seed = 1; seed <= 3; ++seed) {
                RelativeDiagram rd = gen_relative_diagram(horn, seed, caps());
                CHECK(rd.diagram->relativity_error(true).empty());
                CHECK(rd.diagram->functoriality_error().empty());
                CHECK(is_cosieve(*horn.poset, rd.perturbed));
            }
        }
}

TEST_CASE("quasi-isomorphism diagrams")
{
    for (const NamedIndex& idx : contractible_indexes()) {
        DiagramPtr f = gen_quasi_iso_diagram(idx.index, 3, caps());
        for (auto [x, y] : idx.index->poset().leq_pairs())
            CHECK(is_quasi_iso(f->arrow(x, y)));
    }
}

TEST_CASE("named contractible indexes")
{
    const auto all = contractible_indexes();
    CHECK(all.size() >= 5);
    for (const NamedIndex& idx : all)
        CHECK(reduced_homology(nerve(idx.index->poset())).acyclic());
}
