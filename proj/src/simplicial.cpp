#include "relcat/simplicial.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <stdexcept>

namespace relcat {

std::size_t SimplexHash::operator()(const Simplex& s) const noexcept
{
    std::size_t h = 1469598103934665603ULL;
    for (Vertex v : s) {
        h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return h;
}

namespace {

bool simplex_less(const Simplex& a, const Simplex& b)
{
    if (a.size() != b.size())
        return a.size() < b.size();
    return a < b;
}

} // namespace

SimComplex SimComplex::from_facets(std::size_t num_vertices, std::vector<Simplex> facets)
{
    std::set<Simplex> all;
    for (auto& f : facets) {
        std::sort(f.begin(), f.end());
        if (std::adjacent_find(f.begin(), f.end()) != f.end())
            throw std::invalid_argument("simplicial complex: repeated vertex in a simplex");
        if (f.empty())
            continue;
        if (f.back() >= num_vertices)
            throw std::invalid_argument("simplicial complex: vertex out of range");
        const std::size_t m = f.size();
        for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << m); ++mask) {
            Simplex s;
            for (std::size_t b = 0; b < m; ++b)
                if ((mask >> b) & 1U)
                    s.push_back(f[b]);
            all.insert(std::move(s));
        }
    }
    return from_simplices(num_vertices, std::vector<Simplex>(all.begin(), all.end()));
}

SimComplex SimComplex::from_simplices(std::size_t num_vertices, std::vector<Simplex> simplices)
{
    SimComplex k;
    k.num_vertices_ = num_vertices;
    for (auto& s : simplices) {
        std::sort(s.begin(), s.end());
        if (s.empty())
            throw std::invalid_argument("simplicial complex: empty simplex");
        if (std::adjacent_find(s.begin(), s.end()) != s.end())
            throw std::invalid_argument("simplicial complex: repeated vertex in a simplex");
        if (s.back() >= num_vertices)
            throw std::invalid_argument("simplicial complex: vertex out of range");
    }
    std::sort(simplices.begin(), simplices.end(), simplex_less);
    simplices.erase(std::unique(simplices.begin(), simplices.end()), simplices.end());
    for (auto& s : simplices) {
        const std::size_t d = s.size() - 1;
        if (k.by_dim_.size() <= d)
            k.by_dim_.resize(d + 1);
        k.by_dim_[d].push_back(std::move(s));
    }
    if (num_vertices > 0 && k.count(0) != num_vertices)
        throw std::invalid_argument("simplicial complex: not every vertex is a simplex");
    k.build_index();
    for (int d = 1; d <= k.dimension(); ++d)
        for (const auto& s : k.by_dim_[d])
            for (std::size_t j = 0; j < s.size(); ++j) {
                Simplex f = s;
                f.erase(f.begin() + static_cast<long>(j));
                if (!k.index_[d - 1].count(f))
                    throw std::invalid_argument("simplicial complex: not closed under faces");
            }
    return k;
}

void SimComplex::build_index()
{
    index_.assign(by_dim_.size(), {});
    for (std::size_t d = 0; d < by_dim_.size(); ++d) {
        index_[d].reserve(by_dim_[d].size() * 2);
        for (std::size_t i = 0; i < by_dim_[d].size(); ++i)
            index_[d].emplace(by_dim_[d][i], i);
    }
}

const std::vector<Simplex>& SimComplex::simplices(int d) const
{
    static const std::vector<Simplex> none;
    if (d < 0 || d > dimension())
        return none;
    return by_dim_[d];
}

std::size_t SimComplex::total() const
{
    std::size_t t = 0;
    for (const auto& v : by_dim_)
        t += v.size();
    return t;
}

std::optional<std::size_t> SimComplex::index_of(const Simplex& s) const
{
    if (s.empty() || s.size() > by_dim_.size())
        return std::nullopt;
    auto it = index_[s.size() - 1].find(s);
    if (it == index_[s.size() - 1].end())
        return std::nullopt;
    return it->second;
}

std::vector<std::size_t> SimComplex::f_vector() const
{
    std::vector<std::size_t> f;
    for (const auto& v : by_dim_)
        f.push_back(v.size());
    return f;
}

long long SimComplex::euler_characteristic() const
{
    long long chi = 0;
    for (std::size_t d = 0; d < by_dim_.size(); ++d)
        chi += (d % 2 == 0 ? 1 : -1) * static_cast<long long>(by_dim_[d].size());
    return chi;
}

SimComplex nerve(const Poset& p)
{
    std::vector<std::vector<ElementId>> above(p.size());
    for (ElementId a = 0; a < p.size(); ++a)
        above[a] = p.strict_upper_set(a);
    std::vector<Simplex> all;
    Simplex cur;
    std::function<void(ElementId)> extend = [&](ElementId last) {
        Simplex s = cur;
        std::sort(s.begin(), s.end());
        all.push_back(std::move(s));
        for (ElementId b : above[last]) {
            cur.push_back(b);
            extend(b);
            cur.pop_back();
        }
    };
    for (ElementId a = 0; a < p.size(); ++a) {
        cur = {a};
        extend(a);
    }
    return SimComplex::from_simplices(p.size(), std::move(all));
}

Subdivided barycentric_subdivision(const SimComplex& k)
{
    Subdivided out;
    for (int d = 0; d <= k.dimension(); ++d)
        for (const auto& s : k.simplices(d))
            out.origin.push_back(s);
    const std::size_t m = out.origin.size();
    Poset faces = Poset::from_relation(m, [&](ElementId a, ElementId b) {
        const auto& x = out.origin[a];
        const auto& y = out.origin[b];
        return std::includes(y.begin(), y.end(), x.begin(), x.end());
    });
    out.complex = nerve(faces);
    return out;
}

SimComplex full_simplex(int n)
{
    Simplex all;
    for (int i = 0; i <= n; ++i)
        all.push_back(static_cast<Vertex>(i));
    return SimComplex::from_facets(static_cast<std::size_t>(n + 1), {all});
}

SimComplex simplex_boundary(int n)
{
    std::vector<Simplex> facets;
    for (int skip = 0; skip <= n; ++skip) {
        Simplex f;
        for (int i = 0; i <= n; ++i)
            if (i != skip)
                f.push_back(static_cast<Vertex>(i));
        facets.push_back(f);
    }
    return SimComplex::from_facets(static_cast<std::size_t>(n + 1), facets);
}

SimComplex induced_subcomplex(const SimComplex& k, const std::vector<char>& keep, std::vector<Vertex>* old_ids)
{
    if (keep.size() != k.num_vertices())
        throw std::invalid_argument("induced_subcomplex: mask size differs from the vertex count");
    std::vector<Vertex> renum(k.num_vertices(), 0);
    std::vector<Vertex> back;
    for (Vertex v = 0; v < k.num_vertices(); ++v)
        if (keep[v]) {
            renum[v] = static_cast<Vertex>(back.size());
            back.push_back(v);
        }
    std::vector<Simplex> out;
    for (int d = 0; d <= k.dimension(); ++d)
        for (const auto& s : k.simplices(d)) {
            if (!std::all_of(s.begin(), s.end(), [&](Vertex v) { return keep[v] != 0; }))
                continue;
            Simplex t;
            for (Vertex v : s)
                t.push_back(renum[v]);
            out.push_back(std::move(t));
        }
    if (old_ids)
        *old_ids = back;
    return SimComplex::from_simplices(back.size(), std::move(out));
}

bool is_complex_isomorphism(const SimComplex& a, const SimComplex& b, const std::vector<Vertex>& vertex_map)
{
    if (a.num_vertices() != b.num_vertices() || vertex_map.size() != a.num_vertices())
        return false;
    if (a.f_vector() != b.f_vector())
        return false;
    std::vector<char> hit(b.num_vertices(), 0);
    for (Vertex v : vertex_map) {
        if (v >= b.num_vertices() || hit[v])
            return false;
        hit[v] = 1;
    }
    for (int d = 0; d <= a.dimension(); ++d)
        for (const auto& s : a.simplices(d)) {
            Simplex t;
            for (Vertex v : s)
                t.push_back(vertex_map[v]);
            std::sort(t.begin(), t.end());
            if (!b.index_of(t))
                return false;
        }
    return true;
}

} // namespace relcat
