#include <algorithm>
#include <queue>
#include <random>
#include <stdexcept>
#include <unordered_set>

#include "relcat/homology.hpp"

namespace relcat {

namespace {

// Face lattice of a complex with global ids, dimension-major.
struct FaceGraph {
    std::vector<const Simplex*> simplex;
    std::vector<int> dim;
    std::vector<std::vector<std::uint32_t>> facets, cofacets;

    explicit FaceGraph(const SimComplex& k)
    {
        std::vector<std::size_t> offset;
        std::size_t total = 0;
        for (int d = 0; d <= k.dimension(); ++d) {
            offset.push_back(total);
            for (const auto& s : k.simplices(d)) {
                simplex.push_back(&s);
                dim.push_back(d);
            }
            total += k.count(d);
        }
        facets.resize(total);
        cofacets.resize(total);
        for (std::size_t g = 0; g < total; ++g) {
            const int d = dim[g];
            if (d == 0)
                continue;
            const Simplex& s = *simplex[g];
            for (std::size_t j = 0; j < s.size(); ++j) {
                Simplex f = s;
                f.erase(f.begin() + static_cast<long>(j));
                const auto f_id = static_cast<std::uint32_t>(offset[d - 1] + *k.index_of(f));
                facets[g].push_back(f_id);
                cofacets[f_id].push_back(static_cast<std::uint32_t>(g));
            }
        }
    }
};

std::optional<CollapseCertificate> attempt(const FaceGraph& g, const std::vector<std::uint64_t>* rank)
{
    const std::size_t total = g.simplex.size();
    std::vector<char> alive(total, 1);
    std::vector<std::uint32_t> live_cofacets(total);
    for (std::size_t i = 0; i < total; ++i)
        live_cofacets[i] = static_cast<std::uint32_t>(g.cofacets[i].size());

    // (coface dim, -order) max-heap entry keyed on the face
    struct Entry {
        int coface_dim;
        std::uint64_t order;
        std::uint32_t face;
        bool operator<(const Entry& o) const
        {
            if (coface_dim != o.coface_dim)
                return coface_dim < o.coface_dim;
            return order > o.order;
        }
    };
    std::priority_queue<Entry> heap;
    auto consider = [&](std::uint32_t f) {
        if (alive[f] && live_cofacets[f] == 1)
            heap.push({g.dim[f] + 1, rank ? (*rank)[f] : f, f});
    };
    for (std::uint32_t i = 0; i < total; ++i)
        consider(i);

    CollapseCertificate cert;
    std::size_t remaining = total;
    while (!heap.empty()) {
        const std::uint32_t f = heap.top().face;
        heap.pop();
        if (!alive[f] || live_cofacets[f] != 1)
            continue;
        std::uint32_t co = 0;
        for (std::uint32_t c : g.cofacets[f])
            if (alive[c]) {
                co = c;
                break;
            }
        alive[f] = 0;
        alive[co] = 0;
        remaining -= 2;
        cert.steps.push_back({*g.simplex[f], *g.simplex[co]});
        for (std::uint32_t x : g.facets[co]) {
            --live_cofacets[x];
            consider(x);
        }
        for (std::uint32_t x : g.facets[f]) {
            --live_cofacets[x];
            consider(x);
        }
    }
    if (remaining != 1)
        return std::nullopt;
    for (std::size_t i = 0; i < total; ++i)
        if (alive[i])
            cert.final_vertex = (*g.simplex[i])[0];
    return cert;
}

} // namespace

std::optional<CollapseCertificate> collapse_search(const SimComplex& k, CollapseOptions opts)
{
    if (k.empty())
        throw std::invalid_argument("collapse_search: empty complex");
    const FaceGraph g(k);
    if (auto c = attempt(g, nullptr))
        return c;
    std::mt19937_64 rng(opts.seed);
    std::vector<std::uint64_t> rank(g.simplex.size());
    for (int r = 0; r < opts.restarts; ++r) {
        for (auto& x : rank)
            x = rng();
        if (auto c = attempt(g, &rank))
            return c;
    }
    return std::nullopt;
}

std::string replay_certificate(const SimComplex& k, const CollapseCertificate& c)
{
    std::unordered_set<Simplex, SimplexHash> present;
    std::vector<std::vector<Vertex>> nbr(k.num_vertices());
    for (int d = 0; d <= k.dimension(); ++d)
        for (const auto& s : k.simplices(d))
            present.insert(s);
    for (const auto& e : k.simplices(1)) {
        nbr[e[0]].push_back(e[1]);
        nbr[e[1]].push_back(e[0]);
    }
    auto count_cofacets = [&](const Simplex& s) {
        std::size_t n = 0;
        for (Vertex v : nbr[s[0]]) {
            if (std::binary_search(s.begin(), s.end(), v))
                continue;
            Simplex t = s;
            t.insert(std::upper_bound(t.begin(), t.end(), v), v);
            n += present.count(t);
        }
        return n;
    };
    std::size_t step = 0;
    for (const auto& st : c.steps) {
        const std::string at = "step " + std::to_string(step++) + ": ";
        if (st.face.empty() || st.coface.size() != st.face.size() + 1 ||
            !std::includes(st.coface.begin(), st.coface.end(), st.face.begin(), st.face.end()))
            return at + "not a codimension one face pair";
        if (!present.count(st.face) || !present.count(st.coface))
            return at + "simplex already removed";
        if (count_cofacets(st.face) != 1)
            return at + "face is not free";
        present.erase(st.face);
        present.erase(st.coface);
    }
    if (present.size() != 1 || !present.count(Simplex{c.final_vertex}))
        return "collapse does not end at the stated vertex";
    return {};
}

std::string to_string(VerdictKind v)
{
    switch (v) {
    case VerdictKind::Collapsible: return "collapsible";
    case VerdictKind::AcyclicOnly: return "acyclic-only";
    case VerdictKind::NonAcyclic: return "non-acyclic";
    }
    return "?";
}

ContractibilityVerdict contractibility_verdict(const SimComplex& k, CollapseOptions opts)
{
    ContractibilityVerdict v;
    v.homology = reduced_homology(k);
    auto cert = collapse_search(k, opts);
    if (cert) {
        const std::string why = replay_certificate(k, *cert);
        if (!why.empty())
            throw std::logic_error("contractibility_verdict: certificate replay failed: " + why);
        if (!v.homology.acyclic())
            throw std::logic_error("contractibility_verdict: collapsible complex with nonzero homology");
        v.kind = VerdictKind::Collapsible;
        v.certificate = std::move(cert);
    } else {
        v.kind = v.homology.acyclic() ? VerdictKind::AcyclicOnly : VerdictKind::NonAcyclic;
    }
    return v;
}

} // namespace relcat
