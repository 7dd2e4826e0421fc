#include "relcat/generator.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace relcat {

namespace {

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); }
    bool unite(int a, int b)
    {
        a = find(a);
        b = find(b);
        if (a == b)
            return false;
        parent[std::max(a, b)] = std::min(a, b);
        return true;
    }
};

// Standard form of G(i): spheres ordered by (degree, class), then disk tops,
// then disk bottoms, per degree (the layout of standard_complex).
struct VertexLayout {
    int lo = 0, hi = 0;
    std::map<int, std::vector<std::pair<int, std::size_t>>> spheres; // degree -> (class, multiplicity)
    std::map<int, std::size_t> tops;                                 // disks with top in this degree

    std::size_t sphere_count(int k) const
    {
        std::size_t s = 0;
        if (auto it = spheres.find(k); it != spheres.end())
            for (auto& [c, m] : it->second)
                s += m;
        return s;
    }
    std::size_t top_count(int k) const
    {
        auto it = tops.find(k);
        return it == tops.end() ? 0 : it->second;
    }
    std::size_t dim(int k) const { return sphere_count(k) + top_count(k) + top_count(k + 1); }
    std::size_t sphere_offset(int k, int cls) const
    {
        std::size_t s = 0;
        for (auto& [c, m] : spheres.at(k)) {
            if (c == cls)
                return s;
            s += m;
        }
        throw std::logic_error("generator: class not present");
    }
    std::size_t top_offset(int k) const { return sphere_count(k); }
    std::size_t bottom_offset(int k) const { return sphere_count(k) + top_count(k); }

    ComplexPtr complex() const
    {
        std::vector<std::size_t> betti(hi - lo + 1, 0);
        std::vector<std::pair<int, std::size_t>> disks;
        for (int k = lo; k <= hi; ++k) {
            betti[k - lo] = sphere_count(k);
            if (top_count(k) > 0)
                disks.emplace_back(k, top_count(k));
        }
        ChainComplexQ c = standard_complex(lo, betti, disks);
        // pad to the full degree range so every vertex has the same shape
        if (c.total_dim() == 0 || c.lo() != lo || c.hi() != hi) {
            std::vector<std::size_t> dims;
            std::vector<QMatrix> diffs;
            for (int k = lo; k <= hi; ++k) {
                dims.push_back(c.dim(k));
                if (k > lo)
                    diffs.push_back(c.d(k));
            }
            return make_complex(ChainComplexQ(lo, std::move(dims), std::move(diffs)));
        }
        return make_complex(std::move(c));
    }
};

} // namespace

std::vector<int> saturated_classes(const RelPoset& structure)
{
    const int n = static_cast<int>(structure.size());
    UnionFind uf(n);
    for (auto [a, b] : structure.marked_pairs(false))
        uf.unite(static_cast<int>(a), static_cast<int>(b));
    bool changed = true;
    while (changed) {
        changed = false;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                for (int l = j + 1; l < n; ++l)
                    for (int m = l + 1; m < n; ++m)
                        if (uf.find(i) == uf.find(l) && uf.find(j) == uf.find(m) && uf.find(i) != uf.find(j)) {
                            uf.unite(i, j);
                            changed = true;
                        }
    }
    std::vector<int> id(n, -1), out(n);
    int next = 0;
    for (int v = 0; v < n; ++v) {
        const int r = uf.find(v);
        if (id[r] < 0)
            id[r] = next++;
        out[v] = id[r];
    }
    return out;
}

DiagramPtr gen_sharp_linear(const RelPosetPtr& structure, std::uint64_t seed, const Caps& caps)
{
    const int nv = static_cast<int>(structure->size());
    for (int a = 0; a < nv; ++a)
        for (int b = 0; b < nv; ++b)
            if (structure->leq(a, b) != (a <= b))
                throw std::invalid_argument("gen_sharp_linear: structure is not a linear order 0 < ... < n");
    if (caps.max_dim < 2)
        throw std::invalid_argument("gen_sharp_linear: dimension cap below 2");
    Rng rng(seed);
    const std::vector<int> cls = saturated_classes(*structure);
    const int ncls = *std::max_element(cls.begin(), cls.end()) + 1;
    std::vector<int> first(ncls, nv), last(ncls, -1);
    for (int v = 0; v < nv; ++v) {
        first[cls[v]] = std::min(first[cls[v]], v);
        last[cls[v]] = std::max(last[cls[v]], v);
    }
    auto open = [&](int c, int v) { return first[c] <= v && v <= last[c]; };
    // one dimension per degree stays free for the acyclic perturbation
    const std::size_t budget = caps.max_dim - 1;

    std::vector<int> deg(ncls);
    std::vector<std::size_t> mult(ncls, 1);
    for (int c = 0; c < ncls; ++c)
        deg[c] = static_cast<int>(random_int(rng, caps.min_degree, caps.max_degree));
    auto load = [&](int v, int k) {
        std::size_t s = 0;
        for (int c = 0; c < ncls; ++c)
            if (open(c, v) && deg[c] == k)
                s += mult[c];
        return s;
    };
    for (int c = 0; c < ncls; ++c) {
        bool over = false;
        for (int v = 0; v < nv; ++v)
            if (load(v, deg[c]) > budget)
                over = true;
        if (over)
            throw std::invalid_argument("gen_sharp_linear: caps too small for the number of classes");
    }
    for (int c = 0; c < ncls; ++c) {
        if (random_int(rng, 0, 1) == 0)
            continue;
        ++mult[c];
        for (int v = 0; v < nv; ++v)
            if (open(c, v) && load(v, deg[c]) > budget) {
                --mult[c];
                break;
            }
    }

    std::vector<VertexLayout> lay(nv);
    for (int v = 0; v < nv; ++v) {
        VertexLayout& L = lay[v];
        L.lo = caps.min_degree;
        L.hi = caps.max_degree;
        for (int c = 0; c < ncls; ++c)
            if (open(c, v))
                L.spheres[deg[c]].emplace_back(c, mult[c]);
        for (int k = caps.min_degree + 1; k <= caps.max_degree; ++k) {
            const std::size_t used = std::max(L.dim(k), L.dim(k - 1));
            const std::size_t room = used >= budget ? 0 : budget - used;
            const auto cnt = static_cast<std::size_t>(random_int(rng, 0, static_cast<long>(std::min<std::size_t>(room, 2))));
            if (cnt > 0)
                L.tops[k] = cnt;
        }
    }

    std::vector<ComplexPtr> standard(nv);
    std::vector<BasisChange> change;
    for (int v = 0; v < nv; ++v) {
        standard[v] = lay[v].complex();
        change.push_back(random_basis_change(rng, standard[v]));
    }

    std::map<ElementPair, ChainMap> arrows;
    for (int v = 0; v + 1 < nv; ++v) {
        const VertexLayout& A = lay[v];
        const VertexLayout& B = lay[v + 1];
        std::map<int, QMatrix> comp;
        for (int k = caps.min_degree; k <= caps.max_degree; ++k) {
            MatrixBuilder m(B.dim(k), A.dim(k));
            // spheres of classes open at both ends
            if (A.spheres.count(k))
                for (auto& [c, mc] : A.spheres.at(k))
                    if (open(c, v + 1))
                        m.add_block(B.sphere_offset(k, c), A.sphere_offset(k, c), random_unimodular(rng, mc));
            // disk families with top in degree k and k + 1 share one matrix
            // on tops and bottoms
            auto disk_block = [&](int top_deg, std::size_t rb, std::size_t cb) {
                const std::size_t r = B.top_count(top_deg), c = A.top_count(top_deg);
                if (r == 0 || c == 0)
                    return;
                Rng local(seed ^ (0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(v * 131 + top_deg + 7)));
                for (std::size_t i = 0; i < r; ++i)
                    for (std::size_t j = 0; j < c; ++j)
                        m.add(rb + i, cb + j, random_int(local, -1, 1));
            };
            disk_block(k, B.top_offset(k), A.top_offset(k));
            disk_block(k + 1, B.bottom_offset(k), A.bottom_offset(k));
            // harmless terms: spheres into disk bottoms, disk tops onto spheres
            for (std::size_t i = 0; i < A.sphere_count(k); ++i)
                for (std::size_t j = 0; j < B.top_count(k + 1); ++j)
                    m.add(B.bottom_offset(k) + j, i, random_int(rng, -1, 1));
            for (std::size_t i = 0; i < A.top_count(k); ++i)
                for (std::size_t j = 0; j < B.sphere_count(k); ++j)
                    m.add(j, A.top_offset(k) + i, random_int(rng, -1, 1));
            comp.emplace(k, m.build());
        }
        const ChainMap raw(standard[v], standard[v + 1], std::move(comp));
        arrows.emplace(ElementPair{static_cast<ElementId>(v), static_cast<ElementId>(v + 1)},
                       change[v + 1].forward->after(raw.after(*change[v].backward)));
    }
    std::vector<ComplexPtr> objs;
    for (auto& c : change)
        objs.push_back(c.complex);
    return std::make_shared<const Diagram>(structure, std::move(objs), std::move(arrows), true);
}

DiagramPtr compose_with_phi(const Diagram& g, const SubsetChainPoset& d, bool relative_flag)
{
    std::vector<ElementId> v(d.size());
    for (ElementId x = 0; x < d.size(); ++x) {
        const int p = phi(d.chains[x]);
        if (p < 0 || static_cast<std::size_t>(p) >= g.size())
            throw std::invalid_argument("compose_with_phi: vertex outside the base diagram");
        v[x] = static_cast<ElementId>(p);
    }
    std::vector<ComplexPtr> objs;
    for (ElementId x = 0; x < d.size(); ++x)
        objs.push_back(g.object(v[x]));
    std::map<ElementPair, ChainMap> arrows;
    for (ElementId x = 0; x < d.size(); ++x)
        for (ElementId y : d.poset->poset().upper_covers(x))
            arrows.emplace(ElementPair{x, y}, g.arrow(v[x], v[y]));
    return std::make_shared<const Diagram>(d.poset, std::move(objs), std::move(arrows), relative_flag);
}

DiagramPtr add_acyclic_summand(const Diagram& f, const ElementSet& cosieve, const ComplexPtr& acyclic)
{
    if (!is_cosieve(f.index(), cosieve))
        throw std::invalid_argument("add_acyclic_summand: not a cosieve");
    std::vector<char> in(f.size(), 0);
    for (ElementId x : cosieve)
        in[x] = 1;
    std::vector<ComplexPtr> objs;
    std::vector<std::optional<DirectSum>> sums(f.size());
    for (ElementId x = 0; x < f.size(); ++x) {
        if (in[x]) {
            sums[x] = direct_sum({f.object(x), acyclic});
            objs.push_back(sums[x]->sum);
        } else {
            objs.push_back(f.object(x));
        }
    }
    const ChainMap id = ChainMap::identity(acyclic);
    std::map<ElementPair, ChainMap> arrows;
    for (const auto& [p, m] : f.cover_arrows()) {
        const auto [x, y] = p;
        if (!in[x] && !in[y]) {
            arrows.emplace(p, m);
        } else if (!in[x]) {
            arrows.emplace(p, sums[y]->inclusions[0].after(m));
        } else {
            ChainMap a = sums[y]->inclusions[0].after(m.after(sums[x]->projections[0]));
            ChainMap b = sums[y]->inclusions[1].after(id.after(sums[x]->projections[1]));
            arrows.emplace(p, a + b);
        }
    }
    return std::make_shared<const Diagram>(f.index_ptr(), std::move(objs), std::move(arrows), f.relative_flag());
}

namespace {

ElementSet random_cosieve(Rng& rng, const RelPoset& p)
{
    const auto pick = [&] { return static_cast<ElementId>(random_int(rng, 0, static_cast<long>(p.size()) - 1)); };
    const ElementSet seeds{pick(), pick()};
    return vplus(p, seeds);
}

ComplexPtr single_disk(Rng& rng, const Caps& caps)
{
    if (caps.max_degree <= caps.min_degree)
        return nullptr;
    const int k = static_cast<int>(random_int(rng, caps.min_degree + 1, caps.max_degree));
    return random_basis_change(rng, make_complex(standard_complex(k - 1, {}, {{k, 1}}))).complex;
}

} // namespace

RelativeDiagram gen_relative_diagram(const SubsetChainPoset& horn, std::uint64_t seed, const Caps& caps, bool perturb)
{
    Rng rng(seed);
    RelativeDiagram out;
    out.classes = saturated_classes(*horn.structure);
    out.base = gen_sharp_linear(horn.structure, rng(), caps);
    out.diagram = compose_with_phi(*out.base, horn, true);
    if (perturb && random_int(rng, 0, 3) != 0) {
        if (auto disk = single_disk(rng, caps)) {
            out.perturbed = random_cosieve(rng, *horn.poset);
            out.diagram = add_acyclic_summand(*out.diagram, out.perturbed, disk);
        }
    }
    return out;
}

DiagramPtr gen_quasi_iso_diagram(const RelPosetPtr& index, std::uint64_t seed, const Caps& caps)
{
    Rng rng(seed);
    Caps inner = caps;
    inner.max_dim = std::max<std::size_t>(1, caps.max_dim - 1);
    const ComplexPtr c = random_complex(rng, inner);
    std::vector<BasisChange> change;
    std::vector<ComplexPtr> objs;
    for (ElementId x = 0; x < index->size(); ++x) {
        change.push_back(random_basis_change(rng, c));
        objs.push_back(change.back().complex);
    }
    std::map<ElementPair, ChainMap> arrows;
    for (ElementId x = 0; x < index->size(); ++x)
        for (ElementId y : index->poset().upper_covers(x))
            arrows.emplace(ElementPair{x, y}, change[y].forward->after(*change[x].backward));
    auto f = std::make_shared<const Diagram>(index, std::move(objs), std::move(arrows), true);
    if (auto disk = single_disk(rng, caps))
        return add_acyclic_summand(*f, random_cosieve(rng, *index), disk);
    return f;
}

std::vector<NamedIndex> contractible_indexes()
{
    std::vector<NamedIndex> out;
    auto plain = [](std::size_t n, std::vector<ElementPair> rel) {
        return std::make_shared<const RelPoset>(RelPoset::minimal(Poset::from_generators(n, rel)));
    };
    out.push_back({"point", plain(1, {})});
    out.push_back({"arrow", plain(2, {{0, 1}})});
    out.push_back({"cospan", plain(3, {{0, 2}, {1, 2}})});
    out.push_back({"diamond", plain(4, {{0, 1}, {0, 2}, {1, 3}, {2, 3}})});
    auto s1 = std::make_shared<const RelPoset>(build_simplex(1));
    out.push_back({"sd2-simplex-1", sd2_region(1, Region::Full, -1, s1).poset});
    auto s2 = std::make_shared<const RelPoset>(build_simplex(2));
    out.push_back({"sd2-horn-2-1", sd2_region(2, Region::Horn, 1, s2).poset});
    return out;
}

} // namespace relcat
