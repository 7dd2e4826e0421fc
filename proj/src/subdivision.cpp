#include "relcat/subdivision.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace relcat {

namespace {

bool chain_less(const std::vector<ElementId>& a, const std::vector<ElementId>& b)
{
    if (a.size() != b.size())
        return a.size() < b.size();
    return a < b;
}

bool subset_chain_less(const SubsetChain& a, const SubsetChain& b)
{
    if (a.size() != b.size())
        return a.size() < b.size();
    return a < b;
}

std::vector<ElementId> sorted_copy(const ChainObject& c)
{
    std::vector<ElementId> s = c;
    std::sort(s.begin(), s.end());
    return s;
}

} // namespace

std::vector<ChainObject> enumerate_chains(const Poset& p)
{
    std::vector<ChainObject> out;
    ChainObject cur;
    std::function<void()> extend = [&]() {
        out.push_back(cur);
        ElementId last = cur.back();
        for (ElementId b = 0; b < p.size(); ++b)
            if (p.less(last, b)) {
                cur.push_back(b);
                extend();
                cur.pop_back();
            }
    };
    for (ElementId a = 0; a < p.size(); ++a) {
        cur = {a};
        extend();
    }
    std::sort(out.begin(), out.end(), chain_less);
    return out;
}

XiPoset subdivide(RelPosetPtr p, SubdivisionMode mode)
{
    if (mode == SubdivisionMode::Double) {
        auto inner = std::make_shared<XiPoset>(subdivide(p, SubdivisionMode::Initial));
        XiPoset outer = subdivide(inner->result, SubdivisionMode::Terminal);
        outer.base = std::move(p);
        outer.mode = SubdivisionMode::Double;
        outer.inner = std::move(inner);
        return outer;
    }

    XiPoset x;
    x.base = p;
    x.mode = mode;
    x.chains = enumerate_chains(p->poset());
    std::vector<std::vector<ElementId>> sorted;
    sorted.reserve(x.chains.size());
    for (const auto& c : x.chains)
        sorted.push_back(sorted_copy(c));

    std::vector<std::string> labels;
    for (const auto& c : x.chains) {
        std::string s;
        for (std::size_t i = 0; i < c.size(); ++i) {
            if (i)
                s += "<";
            s += p->label(c[i]);
        }
        labels.push_back("[" + s + "]");
    }

    const bool terminal = mode == SubdivisionMode::Terminal;
    Poset order = Poset::from_relation(
        x.chains.size(),
        [&](ElementId b, ElementId a) {
            // terminal: b <= a iff a refines b; initial: the reverse.
            const auto& small = terminal ? sorted[b] : sorted[a];
            const auto& big = terminal ? sorted[a] : sorted[b];
            return std::includes(big.begin(), big.end(), small.begin(), small.end());
        },
        std::move(labels));
    auto result = RelPoset::from_mark_predicate(std::move(order), [&](ElementId b, ElementId a) {
        if (terminal)
            return p->marked(x.chains[b].back(), x.chains[a].back());
        return p->marked(x.chains[b].front(), x.chains[a].front());
    });
    x.result = std::make_shared<RelPoset>(std::move(result));
    return x;
}

MonotoneMap vertex_map(const XiPoset& x)
{
    std::vector<ElementId> assignment(x.chains.size());
    for (ElementId e = 0; e < x.chains.size(); ++e) {
        switch (x.mode) {
        case SubdivisionMode::Terminal:
            assignment[e] = x.chains[e].back();
            break;
        case SubdivisionMode::Initial:
            assignment[e] = x.chains[e].front();
            break;
        case SubdivisionMode::Double:
            assignment[e] = x.inner->chains[x.chains[e].back()].front();
            break;
        }
    }
    return MonotoneMap(x.result, x.base, std::move(assignment));
}

// ---------------------------------------------------------------- subset chains

int phi(const SubsetChain& c)
{
    if (c.empty() || c.front() == 0)
        throw std::invalid_argument("phi: empty chain or empty bottom set");
    return std::countr_zero(c.front());
}

std::string format_mask(SubsetMask m)
{
    std::string s = "{";
    bool first = true;
    for (int i = 0; i < 32; ++i)
        if ((m >> i) & 1U) {
            if (!first)
                s += ",";
            s += std::to_string(i);
            first = false;
        }
    return s + "}";
}

std::string format_chain(const SubsetChain& c)
{
    std::string s;
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (i)
            s += "<";
        s += format_mask(c[i]);
    }
    return s;
}

std::vector<SubsetChain> enumerate_subset_chains(SubsetMask universe)
{
    std::vector<SubsetChain> out;
    SubsetChain cur;
    std::function<void()> extend = [&]() {
        out.push_back(cur);
        SubsetMask last = cur.back();
        // strict supersets of last inside universe
        SubsetMask free = universe & ~last;
        for (SubsetMask add = free; add != 0; add = (add - 1) & free) {
            cur.push_back(last | add);
            extend();
            cur.pop_back();
        }
    };
    for (SubsetMask m = universe; m != 0; m = (m - 1) & universe) {
        cur = {m};
        extend();
    }
    std::sort(out.begin(), out.end(), subset_chain_less);
    return out;
}

SubsetChain flatten_double(const XiPoset& xi, ElementId e)
{
    if (xi.mode != SubdivisionMode::Double)
        throw std::invalid_argument("flatten_double: not a double subdivision");
    const RelPoset& base = *xi.base;
    for (ElementId a = 0; a < base.size(); ++a)
        for (ElementId b = 0; b < base.size(); ++b)
            if (base.leq(a, b) != (a <= b))
                throw std::invalid_argument("flatten_double: base is not the linear poset 0 < ... < n");
    SubsetChain flat;
    for (ElementId c : xi.chains[e]) {
        SubsetMask m = 0;
        for (ElementId v : xi.inner->chains[c])
            m |= SubsetMask{1} << v;
        flat.push_back(m);
    }
    std::sort(flat.begin(), flat.end());
    for (std::size_t i = 1; i < flat.size(); ++i)
        if ((flat[i - 1] & ~flat[i]) != 0 || flat[i - 1] == flat[i])
            throw std::logic_error("flatten_double: members do not form an inclusion chain");
    return flat;
}

bool in_region(const SubsetChain& c, int n, Region region, int k)
{
    const SubsetMask top = c.back();
    const SubsetMask full = full_mask(n);
    switch (region) {
    case Region::Full:
        return true;
    case Region::Boundary:
        return top != full;
    case Region::Horn:
        return top != full && top != (full & ~(SubsetMask{1} << k));
    }
    return false;
}

std::optional<ElementId> SubsetChainPoset::find(const SubsetChain& c) const
{
    auto it = index.find(c);
    if (it == index.end())
        return std::nullopt;
    return it->second;
}

Poset chain_inclusion_poset(const std::vector<SubsetChain>& chains)
{
    std::vector<std::string> labels;
    labels.reserve(chains.size());
    for (const auto& c : chains)
        labels.push_back(format_chain(c));
    return Poset::from_relation(
        chains.size(),
        [&](ElementId b, ElementId a) {
            return std::includes(chains[a].begin(), chains[a].end(), chains[b].begin(), chains[b].end());
        },
        std::move(labels));
}

SubsetChainPoset sd2_region(int n, Region region, int k, RelPosetPtr structure)
{
    if (n < 0)
        throw std::invalid_argument("sd2_region: n must be non-negative");
    if (n > 8)
        throw std::invalid_argument("sd2_region: n too large");
    if (region == Region::Horn) {
        if (n == 0)
            throw std::invalid_argument("sd2_region: horn requires n >= 1");
        if (k < 0 || k > n)
            throw std::invalid_argument("sd2_region: horn index out of range");
    }
    if (!structure)
        structure = std::make_shared<RelPoset>(build_simplex(n));
    if (structure->size() != static_cast<std::size_t>(n) + 1)
        throw std::invalid_argument("sd2_region: structure size does not match n");

    XiPoset xi = subdivide(structure, SubdivisionMode::Double);
    std::map<SubsetChain, ElementId> nested_of;
    for (ElementId e = 0; e < xi.chains.size(); ++e)
        nested_of.emplace(flatten_double(xi, e), e);

    SubsetChainPoset out;
    out.n = n;
    out.region = region;
    out.k = region == Region::Horn ? k : -1;
    out.structure = structure;
    auto all = enumerate_subset_chains(full_mask(n));
    if (all.size() != nested_of.size())
        throw std::logic_error("sd2_region: chain count differs from the double subdivision");
    std::vector<ElementId> nested;
    for (auto& c : all) {
        if (!in_region(c, n, region, k))
            continue;
        auto it = nested_of.find(c);
        if (it == nested_of.end())
            throw std::logic_error("sd2_region: chain " + format_chain(c) + " has no nested counterpart");
        nested.push_back(it->second);
        out.index.emplace(c, static_cast<ElementId>(out.chains.size()));
        out.chains.push_back(std::move(c));
    }
    Poset order = chain_inclusion_poset(out.chains);
    const RelPoset& xr = *xi.result;
    out.poset = std::make_shared<RelPoset>(RelPoset::from_mark_predicate(
        std::move(order), [&](ElementId b, ElementId a) { return xr.marked(nested[b], nested[a]); }));
    return out;
}

// ---------------------------------------------------------------- cone

KappaPoset kappa(const Poset& d)
{
    KappaPoset k;
    k.base_size = d.size();
    const std::size_t m = d.size();
    std::vector<std::string> labels;
    for (int eps = 0; eps < 2; ++eps)
        for (ElementId a = 0; a < m; ++a)
            labels.push_back("(" + d.label(a) + "," + std::to_string(eps) + ")");
    labels.push_back("k");
    k.poset = Poset::from_relation(
        2 * m + 1,
        [&](ElementId x, ElementId y) {
            const ElementId apex = static_cast<ElementId>(2 * m);
            if (x == apex)
                return y == apex || y >= m;
            if (y == apex)
                return false;
            const bool x1 = x >= m, y1 = y >= m;
            if (x1 && !y1)
                return false;
            return d.leq(x % m, y % m);
        },
        std::move(labels));
    return k;
}

KappaIdentification identify_kappa_boundary(int n, RelPosetPtr structure)
{
    if (n < 1)
        throw std::invalid_argument("identify_kappa_boundary: n must be at least 1");
    KappaIdentification id;
    id.boundary = sd2_region(n, Region::Boundary, -1, structure);
    id.full = sd2_region(n, Region::Full, -1, structure);
    id.cone = kappa(id.boundary.poset->poset());
    const SubsetMask full = full_mask(n);
    const std::size_t m = id.boundary.size();
    id.to_full.resize(2 * m + 1);
    auto lookup = [&](const SubsetChain& c) {
        auto f = id.full.find(c);
        if (!f)
            throw std::logic_error("identify_kappa_boundary: " + format_chain(c) + " missing from the full poset");
        return *f;
    };
    for (ElementId d = 0; d < m; ++d) {
        SubsetChain c = id.boundary.chains[d];
        id.to_full[id.cone.zero(d)] = lookup(c);
        c.push_back(full);
        id.to_full[id.cone.one(d)] = lookup(c);
    }
    id.to_full[id.cone.apex()] = lookup({full});

    const std::size_t total = 2 * m + 1;
    if (total != id.full.size())
        throw std::logic_error("identify_kappa_boundary: sizes differ");
    id.from_full.assign(total, static_cast<ElementId>(total));
    for (ElementId x = 0; x < total; ++x) {
        if (id.from_full[id.to_full[x]] != total)
            throw std::logic_error("identify_kappa_boundary: map is not injective");
        id.from_full[id.to_full[x]] = x;
    }
    const RelPoset& fp = *id.full.poset;
    for (ElementId x = 0; x < total; ++x)
        for (ElementId y = 0; y < total; ++y)
            if (id.cone.poset.leq(x, y) != fp.leq(id.to_full[x], id.to_full[y]))
                throw std::logic_error("identify_kappa_boundary: order differs on (" + id.cone.poset.label(x) + "," +
                                       id.cone.poset.label(y) + ")");
    id.marked_cone = std::make_shared<RelPoset>(RelPoset::from_mark_predicate(
        id.cone.poset, [&](ElementId x, ElementId y) { return fp.marked(id.to_full[x], id.to_full[y]); }));
    return id;
}

KappaHorn kappa_horn(int n, int k, RelPosetPtr structure)
{
    KappaHorn kh;
    auto ident = std::make_shared<KappaIdentification>(identify_kappa_boundary(n, structure));
    kh.horn = sd2_region(n, Region::Horn, k, structure);
    kh.cone = kappa(kh.horn.poset->poset());
    const std::size_t m = kh.horn.size();
    kh.to_full.resize(2 * m + 1);
    for (ElementId d = 0; d < m; ++d) {
        auto b = ident->boundary.find(kh.horn.chains[d]);
        if (!b)
            throw std::logic_error("kappa_horn: horn chain outside the boundary");
        kh.to_full[kh.cone.zero(d)] = ident->to_full[ident->cone.zero(*b)];
        kh.to_full[kh.cone.one(d)] = ident->to_full[ident->cone.one(*b)];
    }
    kh.to_full[kh.cone.apex()] = ident->to_full[ident->cone.apex()];
    const RelPoset& fp = *ident->full.poset;
    for (ElementId x = 0; x < kh.to_full.size(); ++x)
        for (ElementId y = 0; y < kh.to_full.size(); ++y)
            if (kh.cone.poset.leq(x, y) != fp.leq(kh.to_full[x], kh.to_full[y]))
                throw std::logic_error("kappa_horn: cone over the horn is not a full subposet");
    kh.marked_cone = std::make_shared<RelPoset>(RelPoset::from_mark_predicate(
        kh.cone.poset, [&](ElementId x, ElementId y) { return fp.marked(kh.to_full[x], kh.to_full[y]); }));
    kh.identification = std::move(ident);
    return kh;
}

bool kappa_mark_description(const KappaPoset& cone, const SubsetChainPoset& base, const RelPoset& structure,
                            ElementId x, ElementId y)
{
    if (!cone.poset.leq(x, y))
        return false;
    auto value = [&](ElementId z) { return z == cone.apex() ? 0 : phi(base.chains[cone.base_of(z)]); };
    return structure.marked(value(x), value(y));
}

// ---------------------------------------------------------------- conditions

bool admissible(const RelPoset& s, int n, int k, StructureConditions c)
{
    if (n < 1 || k < 0 || k > n || s.size() != static_cast<std::size_t>(n) + 1)
        return false;
    if (k == n && !s.marked(n - 1, n))
        return false;
    if (c == StructureConditions::TopEdge)
        return true;
    if (k == 0 && !s.marked(0, 1))
        return false;
    if (c == StructureConditions::BothEdges)
        return true;
    return !s.marked_pairs(false).empty();
}

std::string to_string(StructureConditions c)
{
    switch (c) {
    case StructureConditions::TopEdge:
        return "top-edge";
    case StructureConditions::BothEdges:
        return "both-edges";
    case StructureConditions::Strict:
        return "strict";
    }
    return "?";
}

// ---------------------------------------------------------------- retraction

nlohmann::json RetractionReport::to_json() const
{
    nlohmann::json j;
    j["identity_ok"] = identity_ok;
    j["monotone_ok"] = monotone_ok;
    j["relative_ok"] = relative_ok;
    if (!failure.empty())
        j["failure"] = failure;
    if (failing_pair)
        j["failing_pair"] = {format_chain(failing_pair->first), format_chain(failing_pair->second)};
    return j;
}

ElementSet retraction_target(const SubsetChainPoset& full, int k)
{
    const int n = full.n;
    const SubsetMask top = full_mask(n);
    ElementSet out;
    for (ElementId e = 0; e < full.size(); ++e) {
        const SubsetChain& c = full.chains[e];
        bool keep = false;
        if (in_region(c, n, Region::Horn, k))
            keep = true;
        else if (c.back() == top) {
            if (c.size() == 1)
                keep = true;
            else {
                SubsetChain prefix(c.begin(), c.end() - 1);
                keep = in_region(prefix, n, Region::Horn, k);
            }
        }
        if (keep)
            out.push_back(e);
    }
    return out;
}

std::vector<ElementId> retraction_formula(const SubsetChainPoset& full, int k)
{
    if (full.region != Region::Full)
        throw std::invalid_argument("retraction_formula: expects the full subdivided simplex");
    const int n = full.n;
    const SubsetMask top = full_mask(n);
    const SubsetMask face = top & ~(SubsetMask{1} << k);
    ElementSet target = retraction_target(full, k);
    std::vector<char> in_target(full.size(), 0);
    for (ElementId t : target)
        in_target[t] = 1;

    auto lookup = [&](const SubsetChain& c) {
        auto f = full.find(c);
        if (!f)
            throw std::logic_error("retraction_formula: image " + format_chain(c) + " not found");
        return *f;
    };
    std::vector<ElementId> map(full.size());
    for (ElementId e = 0; e < full.size(); ++e) {
        const SubsetChain& c = full.chains[e];
        if (in_target[e]) {
            map[e] = e;
            continue;
        }
        if (c == SubsetChain{face} || c == SubsetChain{face, top}) {
            map[e] = lookup({top});
            continue;
        }
        if (std::find(c.begin(), c.end(), face) == c.end())
            throw std::logic_error("retraction_formula: chain " + format_chain(c) + " is not covered");
        SubsetChain w;
        for (SubsetMask s : c)
            if (s != face && s != top)
                w.push_back(s);
        w.push_back(top);
        map[e] = lookup(w);
    }
    return map;
}

RetractionReport validate_retraction(const SubsetChainPoset& full, const ElementSet& target,
                                     const std::vector<ElementId>& map)
{
    RetractionReport r;
    const RelPoset& p = *full.poset;
    std::vector<char> in_target(full.size(), 0);
    for (ElementId t : target)
        in_target[t] = 1;
    auto fail = [&](const std::string& what, ElementId a, ElementId b) {
        if (r.failure.empty()) {
            r.failure = what;
            r.failing_pair = std::make_pair(full.chains[a], full.chains[b]);
        }
    };

    r.identity_ok = map.size() == full.size();
    for (ElementId e = 0; r.identity_ok && e < full.size(); ++e) {
        if (!in_target[map[e]]) {
            r.identity_ok = false;
            fail("value outside the target", e, map[e]);
        } else if (in_target[e] && map[e] != e) {
            r.identity_ok = false;
            fail("not the identity on the target", e, map[e]);
        }
    }
    if (map.size() != full.size())
        return r;

    r.monotone_ok = true;
    for (ElementId a = 0; a < full.size() && r.monotone_ok; ++a)
        for (ElementId b = 0; b < full.size(); ++b)
            if (p.leq(a, b) && !p.leq(map[a], map[b])) {
                r.monotone_ok = false;
                fail("order not preserved", a, b);
                break;
            }

    r.relative_ok = true;
    for (auto [a, b] : p.marked_pairs(false))
        if (!p.marked(map[a], map[b])) {
            r.relative_ok = false;
            fail("mark not preserved", a, b);
            break;
        }
    return r;
}

Retraction retraction_r(int n, int k, RelPosetPtr structure)
{
    if (n < 1 || k < 0 || k > n)
        throw std::invalid_argument("retraction_r: need n >= 1 and 0 <= k <= n");
    if (!structure || !admissible(*structure, n, k, StructureConditions::BothEdges))
        throw std::invalid_argument("retraction_r: structure must mark 0-1 when k = 0 and (n-1)-n when k = n");
    Retraction r;
    r.full = sd2_region(n, Region::Full, -1, structure);
    r.target = retraction_target(r.full, k);
    r.map = retraction_formula(r.full, k);
    r.report = validate_retraction(r.full, r.target, r.map);
    return r;
}

} // namespace relcat
