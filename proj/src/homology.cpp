#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>

#include "relcat/homology.hpp"

namespace relcat {

ChainComplexZ boundary_matrices(const SimComplex& k)
{
    if (k.empty())
        throw std::invalid_argument("boundary_matrices: empty complex");
    ChainComplexZ c;
    const int top = k.dimension();
    for (int d = 0; d <= top; ++d)
        c.dims.push_back(k.count(d));

    SparseIntMatrix aug;
    aug.rows = 1;
    aug.cols = k.count(0);
    aug.columns.assign(aug.cols, {{0u, 1}});
    c.boundary.push_back(std::move(aug));

    for (int d = 1; d <= top; ++d) {
        SparseIntMatrix b;
        b.rows = k.count(d - 1);
        b.cols = k.count(d);
        b.columns.resize(b.cols);
        const auto& ss = k.simplices(d);
        for (std::size_t i = 0; i < ss.size(); ++i) {
            for (std::size_t j = 0; j < ss[i].size(); ++j) {
                Simplex f = ss[i];
                f.erase(f.begin() + static_cast<long>(j));
                auto idx = k.index_of(f);
                if (!idx)
                    throw std::logic_error("boundary_matrices: missing face");
                b.columns[i].emplace_back(static_cast<std::uint32_t>(*idx), j % 2 == 0 ? 1 : -1);
            }
            std::sort(b.columns[i].begin(), b.columns[i].end());
        }
        c.boundary.push_back(std::move(b));
    }

    // consecutive composites vanish
    for (std::size_t d = 1; d < c.boundary.size(); ++d) {
        const auto& hi = c.boundary[d];
        const auto& lo = c.boundary[d - 1];
        std::map<std::uint32_t, std::int64_t> acc;
        for (const auto& col : hi.columns) {
            acc.clear();
            for (auto [r, v] : col)
                for (auto [r2, v2] : lo.columns[r])
                    acc[r2] += v * v2;
            for (auto& [r2, v] : acc)
                if (v != 0)
                    throw std::logic_error("boundary_matrices: boundary of a boundary is nonzero");
        }
    }
    return c;
}

HomologyReport homology_of(const ChainComplexZ& c)
{
    const std::size_t n = c.dims.size();
    if (c.boundary.size() != n)
        throw std::invalid_argument("homology_of: one boundary map per dimension expected");
    std::vector<InvariantFactors> inv;
    inv.reserve(n + 1);
    for (const auto& b : c.boundary)
        inv.push_back(invariant_factors(b));
    inv.emplace_back();
    HomologyReport r;
    for (std::size_t d = 0; d < n; ++d) {
        HomologyReport::Dim dim;
        dim.dim = static_cast<int>(d);
        const std::size_t used = inv[d].rank + inv[d + 1].rank;
        if (used > c.dims[d])
            throw std::logic_error("homology_of: ranks exceed the chain group");
        dim.betti = c.dims[d] - used;
        dim.torsion = inv[d + 1].nontrivial;
        r.dims.push_back(std::move(dim));
    }
    return r;
}

HomologyReport reduced_homology(const SimComplex& k)
{
    if (k.empty())
        throw std::invalid_argument("reduced_homology: empty complex");
    return homology_of(boundary_matrices(k));
}

bool HomologyReport::acyclic() const
{
    return std::all_of(dims.begin(), dims.end(), [](const Dim& d) { return d.betti == 0 && d.torsion.empty(); });
}

bool HomologyReport::operator==(const HomologyReport& o) const
{
    // trailing zero groups do not count
    const std::size_t n = std::max(dims.size(), o.dims.size());
    for (std::size_t d = 0; d < n; ++d) {
        const Dim* a = d < dims.size() ? &dims[d] : nullptr;
        const Dim* b = d < o.dims.size() ? &o.dims[d] : nullptr;
        const std::size_t ba = a ? a->betti : 0, bb = b ? b->betti : 0;
        static const std::vector<mpz_class> none;
        const auto& ta = a ? a->torsion : none;
        const auto& tb = b ? b->torsion : none;
        if (ba != bb || ta != tb)
            return false;
    }
    return true;
}

std::string HomologyReport::summary() const
{
    std::ostringstream os;
    bool any = false;
    for (const auto& d : dims) {
        if (d.betti == 0 && d.torsion.empty())
            continue;
        if (any)
            os << ", ";
        any = true;
        os << "H" << d.dim << "=";
        bool first = true;
        if (d.betti > 0) {
            os << "Z";
            if (d.betti > 1)
                os << "^" << d.betti;
            first = false;
        }
        for (const auto& t : d.torsion) {
            if (!first)
                os << "+";
            os << "Z/" << t.get_str();
            first = false;
        }
    }
    return any ? os.str() : "acyclic";
}

nlohmann::json HomologyReport::to_json() const
{
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& d : dims) {
        nlohmann::json tor = nlohmann::json::array();
        for (const auto& t : d.torsion) {
            if (t.fits_slong_p())
                tor.push_back(t.get_si());
            else
                tor.push_back(t.get_str());
        }
        arr.push_back({{"dim", d.dim}, {"betti", d.betti}, {"torsion", tor}});
    }
    return {{"reduced", true}, {"dims", arr}, {"acyclic", acyclic()}};
}

ElementSet beat_point_core(const Poset& p)
{
    const std::size_t n = p.size();
    std::vector<std::vector<ElementId>> up(n), down(n);
    for (ElementId a = 0; a < n; ++a) {
        up[a] = p.upper_covers(a);
        down[a] = p.lower_covers(a);
    }
    std::vector<char> alive(n, 1);
    std::size_t remaining = n;
    auto beat = [&](ElementId x) { return alive[x] && (up[x].size() == 1 || down[x].size() == 1); };
    auto erase = [](std::vector<ElementId>& v, ElementId x) {
        auto it = std::find(v.begin(), v.end(), x);
        if (it != v.end())
            v.erase(it);
    };

    std::vector<ElementId> work;
    for (ElementId a = n; a-- > 0;)
        work.push_back(a);
    while (!work.empty() && remaining > 1) {
        const ElementId x = work.back();
        work.pop_back();
        if (!beat(x))
            continue;
        alive[x] = 0;
        --remaining;
        for (ElementId w : down[x])
            erase(up[w], x);
        for (ElementId z : up[x])
            erase(down[z], x);
        // pairs w < x < z whose only intermediate was x become covers
        for (ElementId w : down[x])
            for (ElementId z : up[x]) {
                bool blocked = false;
                for (ElementId c : up[w])
                    if (p.leq(c, z)) {
                        blocked = true;
                        break;
                    }
                if (!blocked) {
                    up[w].push_back(z);
                    down[z].push_back(w);
                }
            }
        for (ElementId w : down[x])
            work.push_back(w);
        for (ElementId z : up[x])
            work.push_back(z);
        up[x].clear();
        down[x].clear();
    }
    ElementSet core;
    for (ElementId a = 0; a < n; ++a)
        if (alive[a])
            core.push_back(a);
    return core;
}

HomologyReport poset_homology(const Poset& p)
{
    if (p.size() == 0)
        throw std::invalid_argument("poset_homology: empty poset");
    const ElementSet core = beat_point_core(p);
    return reduced_homology(nerve(Poset::induced(p, core)));
}

OpenStarCheck open_star_check(const SimComplex& l, const std::vector<char>& k_vertices)
{
    if (k_vertices.size() != l.num_vertices())
        throw std::invalid_argument("open_star_check: mask size differs from the vertex count");
    std::vector<char> rest(l.num_vertices());
    for (std::size_t v = 0; v < rest.size(); ++v)
        rest[v] = !k_vertices[v];
    if (std::none_of(rest.begin(), rest.end(), [](char c) { return c != 0; }))
        throw std::invalid_argument("open_star_check: nothing left outside K");

    OpenStarCheck out;
    out.without_star = reduced_homology(induced_subcomplex(l, rest));

    const Subdivided sd = barycentric_subdivision(l);
    std::vector<char> outside_k(sd.origin.size());
    for (std::size_t v = 0; v < sd.origin.size(); ++v)
        outside_k[v] = !std::all_of(sd.origin[v].begin(), sd.origin[v].end(),
                                    [&](Vertex x) { return k_vertices[x] != 0; });
    out.without_k = reduced_homology(induced_subcomplex(sd.complex, outside_k));
    return out;
}

} // namespace relcat
