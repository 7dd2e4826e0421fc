#include "relcat/families.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <iterator>
#include <map>
#include <stdexcept>

namespace relcat {

namespace {

SubsetMask bit(int i) { return SubsetMask{1} << i; }

// Removes bit i and shifts the higher bits down by one.
SubsetMask delete_bit(SubsetMask s, int i)
{
    const SubsetMask low = s & (bit(i) - 1);
    return low | ((s >> (i + 1)) << i);
}

// Keeps only the bits of `e`, packed to 0..|e|-1.
SubsetMask compress(SubsetMask s, SubsetMask e)
{
    SubsetMask out = 0;
    int pos = 0;
    for (int b = 0; b < 32; ++b)
        if ((e >> b) & 1U) {
            if ((s >> b) & 1U)
                out |= bit(pos);
            ++pos;
        }
    return out;
}

SubsetChain transform(const SubsetChain& c, const std::function<SubsetMask(SubsetMask)>& f)
{
    SubsetChain out;
    for (SubsetMask s : c) {
        SubsetMask t = f(s);
        if (t != 0 && (out.empty() || out.back() != t))
            out.push_back(t);
    }
    return out;
}

ElementSet select(const SubsetChainPoset& d, const std::function<bool(const SubsetChain&)>& pred)
{
    ElementSet out;
    for (ElementId e = 0; e < d.size(); ++e)
        if (pred(d.chains[e]))
            out.push_back(e);
    return out;
}

// Maps the elements `src` of `from` through `f` into `to` and checks that the
// result is an order isomorphism onto the elements of `to` accepted by
// `target_pred`.
IsoCheck relabel_iso(const SubsetChainPoset& from, const ElementSet& src,
                     const std::function<SubsetChain(const SubsetChain&)>& f, const RelPoset& to,
                     const std::function<std::optional<ElementId>(const SubsetChain&)>& find_in_to,
                     const ElementSet& target)
{
    IsoCheck r;
    r.size = src.size();
    if (src.size() != target.size()) {
        r.detail = "sizes differ: " + std::to_string(src.size()) + " vs " + std::to_string(target.size());
        return r;
    }
    std::map<ElementId, ElementId> target_local;
    for (ElementId t = 0; t < target.size(); ++t)
        target_local[target[t]] = t;
    std::vector<ElementId> map(src.size());
    for (std::size_t a = 0; a < src.size(); ++a) {
        SubsetChain image = f(from.chains[src[a]]);
        auto id = find_in_to(image);
        if (!id || !target_local.count(*id)) {
            r.detail = "image of " + format_chain(from.chains[src[a]]) + " is " + format_chain(image) +
                       ", not in the target";
            return r;
        }
        map[a] = target_local[*id];
    }
    Subposet s = full_subposet(*from.poset, src);
    Subposet t = full_subposet(to, target);
    r.ok = is_order_isomorphism(*s.poset, *t.poset, map);
    if (!r.ok)
        r.detail = "relabeling is not an order isomorphism";
    return r;
}

} // namespace

SubsetMask initial_segment(int i)
{
    if (i < 0)
        return 0;
    return bit(i + 1) - 1;
}

ElementSet pi_preimage(const SubsetChainPoset& d, SubsetMask e)
{
    return select(d, [&](const SubsetChain& c) { return ((e >> phi(c)) & 1U) != 0; });
}

ElementSet x_family(const SubsetChainPoset& d, int i)
{
    const SubsetMask below = initial_segment(i - 1);
    return select(d, [&](const SubsetChain& c) { return phi(c) == i && (c.back() & below) != 0; });
}

ElementSet xbar_family(const SubsetChainPoset& d, int i)
{
    const SubsetMask below = initial_segment(i - 1);
    return select(d, [&](const SubsetChain& c) { return c.front() == bit(i) && (c.back() & below) != 0; });
}

ElementSet y_family(const SubsetChainPoset& d)
{
    const int n = d.n;
    const SubsetMask pair = bit(n - 1) | bit(n);
    const SubsetMask below = initial_segment(n - 2);
    return select(d, [&](const SubsetChain& c) { return (c.front() & ~pair) == 0 && (c.back() & below) != 0; });
}

std::string FamilySelector::describe() const
{
    switch (kind) {
    case FamilyKind::PiPreimage:
        return "pi-preimage " + format_mask(e);
    case FamilyKind::X:
        return "X i=" + std::to_string(i);
    case FamilyKind::Xbar:
        return "Xbar i=" + std::to_string(i);
    case FamilyKind::Y:
        return "Y";
    }
    return "?";
}

bool claimed_contractible(int n, int k, const FamilySelector& sel)
{
    switch (sel.kind) {
    case FamilyKind::PiPreimage: {
        const SubsetMask full = full_mask(n);
        return sel.e != 0 && (sel.e & ~full) == 0 && sel.e != (full & ~bit(k));
    }
    case FamilyKind::X:
    case FamilyKind::Xbar:
        // Both families are empty for n = 1.
        return n >= 2 && sel.i >= 1 && sel.i <= n && (k < n || sel.i < n - 1);
    case FamilyKind::Y:
        return k == n && n >= 2;
    }
    return false;
}

std::vector<FamilySelector> contractible_selectors(int n, int k)
{
    std::vector<FamilySelector> out;
    for (SubsetMask e = 1; e <= full_mask(n); ++e) {
        FamilySelector s{FamilyKind::PiPreimage, e, -1};
        if (claimed_contractible(n, k, s))
            out.push_back(s);
    }
    for (FamilyKind kind : {FamilyKind::X, FamilyKind::Xbar})
        for (int i = 1; i <= n; ++i) {
            FamilySelector s{kind, 0, i};
            if (claimed_contractible(n, k, s))
                out.push_back(s);
        }
    FamilySelector y{FamilyKind::Y, 0, -1};
    if (claimed_contractible(n, k, y))
        out.push_back(y);
    return out;
}

Family preimage_family(const SubsetChainPoset& horn, const FamilySelector& sel)
{
    const int n = horn.n;
    const int k = horn.k;
    Family f;
    f.selector = sel;
    switch (sel.kind) {
    case FamilyKind::PiPreimage:
        if (sel.e == 0 || (sel.e & ~full_mask(n)) != 0)
            throw std::invalid_argument("preimage_family: subset must be a nonempty subset of {0..n}");
        f.sub = full_subposet(*horn.poset, pi_preimage(horn, sel.e));
        return f;
    case FamilyKind::X:
        if (sel.i < 1 || sel.i > n)
            throw std::invalid_argument("preimage_family: X needs 1 <= i <= n");
        f.sub = full_subposet(*horn.poset, x_family(horn, sel.i));
        return f;
    case FamilyKind::Xbar: {
        if (sel.i < 1 || sel.i > n)
            throw std::invalid_argument("preimage_family: Xbar needs 1 <= i <= n");
        f.sub = full_subposet(*horn.poset, xbar_family(horn, sel.i));
        f.ambient = full_subposet(*horn.poset, x_family(horn, sel.i));
        const Subposet& x = *f.ambient;
        std::vector<ElementId> lambda(x.to_parent.size());
        for (ElementId a = 0; a < x.to_parent.size(); ++a) {
            SubsetChain c = horn.chains[x.to_parent[a]];
            if (c.front() != bit(sel.i))
                c.insert(c.begin(), bit(sel.i));
            auto id = horn.find(c);
            auto local = id ? f.sub.local(*id) : std::nullopt;
            if (!local)
                throw std::logic_error("preimage_family: left adjoint leaves Xbar at " + format_chain(c));
            lambda[a] = *local;
        }
        std::vector<ElementId> incl(f.sub.to_parent.size());
        for (ElementId a = 0; a < incl.size(); ++a)
            incl[a] = *x.local(f.sub.to_parent[a]);
        f.lambda = MonotoneMap(x.poset, f.sub.poset, std::move(lambda));
        f.inclusion = MonotoneMap(f.sub.poset, x.poset, std::move(incl));
        return f;
    }
    case FamilyKind::Y:
        if (k != n || n < 2)
            throw std::invalid_argument("preimage_family: Y needs k = n >= 2");
        f.sub = full_subposet(*horn.poset, y_family(horn));
        return f;
    }
    throw std::invalid_argument("preimage_family: unknown selector");
}

Family preimage_family(int n, int k, RelPosetPtr structure, const FamilySelector& sel)
{
    return preimage_family(sd2_region(n, Region::Horn, k, std::move(structure)), sel);
}

XbarAmbient xbar_ambient(const SubsetChainPoset& horn, int i)
{
    const int n = horn.n;
    const int k = horn.k;
    if (n < 2 || i < 1 || i > n)
        throw std::invalid_argument("xbar_ambient: need n >= 2 and 1 <= i <= n");
    XbarAmbient out;
    if (k == i)
        out.ambient = sd2_region(n - 1, Region::Boundary, -1, nullptr);
    else if (k < i)
        out.ambient = sd2_region(n - 1, Region::Horn, k, nullptr);
    else
        out.ambient = sd2_region(n - 1, Region::Horn, k - 1, nullptr);
    const SubsetMask face = full_mask(n - 1) & ~(bit(i) - 1);
    out.face = select(out.ambient, [&](const SubsetChain& c) { return (c.back() & ~face) == 0; });
    return out;
}

IsoCheck check_xbar_isomorphism(const SubsetChainPoset& horn, int i)
{
    const XbarAmbient amb = xbar_ambient(horn, i);
    const ElementSet all = all_elements(*amb.ambient.poset);
    ElementSet keep;
    std::set_difference(all.begin(), all.end(), amb.face.begin(), amb.face.end(), std::back_inserter(keep));
    const SubsetChainPoset& target = amb.ambient;
    return relabel_iso(
        horn, xbar_family(horn, i),
        [&](const SubsetChain& c) { return transform(c, [&](SubsetMask s) { return delete_bit(s, i); }); },
        *target.poset, [&](const SubsetChain& c) { return target.find(c); }, keep);
}

YDecomposition decompose_y(const SubsetChainPoset& horn)
{
    const int n = horn.n;
    if (horn.region != Region::Horn || horn.k != n || n < 2)
        throw std::invalid_argument("decompose_y: needs the horn at k = n >= 2");
    YDecomposition y;
    const SubsetMask pair = bit(n - 1) | bit(n);
    y.y = y_family(horn);
    for (ElementId e : y.y) {
        const SubsetChain& c = horn.chains[e];
        if (c.front() == bit(n))
            y.y0.push_back(e);
        if (c.front() == bit(n - 1))
            y.y1.push_back(e);
        if (c.front() == pair || (c.size() > 1 && c[1] == pair))
            y.y2.push_back(e);
    }

    {
        auto target = sd2_region(n - 1, Region::Boundary, -1, nullptr);
        ElementSet keep = select(target, [&](const SubsetChain& c) { return c != SubsetChain{bit(n - 1)}; });
        y.y0_iso = relabel_iso(
            horn, y.y0,
            [&](const SubsetChain& c) { return transform(c, [&](SubsetMask s) { return s & ~bit(n); }); },
            *target.poset, [&](const SubsetChain& c) { return target.find(c); }, keep);
    }
    {
        auto target = sd2_region(n - 1, Region::Horn, n - 1, nullptr);
        ElementSet keep = select(target, [&](const SubsetChain& c) { return c != SubsetChain{bit(n - 1)}; });
        y.y1_iso = relabel_iso(
            horn, y.y1,
            [&](const SubsetChain& c) { return transform(c, [&](SubsetMask s) { return delete_bit(s, n - 1); }); },
            *target.poset, [&](const SubsetChain& c) { return target.find(c); }, keep);
    }

    // Strips the leading members inside {n-1, n}; the rest loses n-1 and n.
    auto rest_of = [&](const SubsetChain& c) {
        SubsetChain rest;
        for (SubsetMask s : c)
            if ((s & ~pair) != 0)
                rest.push_back(s & ~pair);
        return rest;
    };
    auto base = sd2_region(n - 2, Region::Boundary, -1, nullptr);
    {
        // Second factor: {n} <- {n-1,n} -> {n-1} read as chains under
        // refinement, so the middle is the minimum.
        Poset three = Poset::from_relation(
            3, [](ElementId a, ElementId b) { return a == b || a == 1; }, {"{n}", "{n-1,n}", "{n-1}"});
        RelPoset prod = product(*base.poset, RelPoset::minimal(std::move(three)));
        auto find_in_prod = [&](const SubsetChain& c) -> std::optional<ElementId> {
            // c encodes (rest, t) with t smuggled in as the last member.
            SubsetChain rest(c.begin(), c.end() - 1);
            auto b = base.find(rest);
            if (!b)
                return std::nullopt;
            return static_cast<ElementId>(*b * 3 + c.back());
        };
        auto encode = [&](const SubsetChain& c) {
            SubsetChain out = rest_of(c);
            SubsetMask t = 3;
            if (c.front() == pair)
                t = 1;
            else if (c.size() > 1 && c[1] == pair)
                t = c.front() == bit(n) ? 0 : 2;
            out.push_back(t);
            return out;
        };
        y.y2_iso = relabel_iso(horn, y.y2, encode, prod, find_in_prod, all_elements(prod));
    }
    {
        ElementSet y02, y12;
        for (ElementId e : y.y2) {
            const SubsetChain& c = horn.chains[e];
            if (c.size() > 1 && c[1] == pair) {
                if (c.front() == bit(n))
                    y02.push_back(e);
                else
                    y12.push_back(e);
            }
        }
        auto find_in_base = [&](const SubsetChain& c) { return base.find(c); };
        y.y02_iso = relabel_iso(horn, y02, rest_of, *base.poset, find_in_base, all_elements(*base.poset));
        y.y12_iso = relabel_iso(horn, y12, rest_of, *base.poset, find_in_base, all_elements(*base.poset));
    }

    // Every chain of Y must lie in one of the three parts.
    Subposet ysub = full_subposet(*horn.poset, y.y);
    std::vector<char> in0(horn.size(), 0), in1(horn.size(), 0), in2(horn.size(), 0);
    for (ElementId e : y.y0)
        in0[e] = 1;
    for (ElementId e : y.y1)
        in1[e] = 1;
    for (ElementId e : y.y2)
        in2[e] = 1;
    y.chains_covered = true;
    for (const auto& chain : enumerate_chains(ysub.poset->poset())) {
        bool a = true, b = true, c = true;
        for (ElementId local : chain) {
            ElementId e = ysub.to_parent[local];
            a = a && in0[e];
            b = b && in1[e];
            c = c && in2[e];
        }
        if (!(a || b || c)) {
            y.chains_covered = false;
            break;
        }
    }
    return y;
}

PreimageReduction preimage_reduction(const SubsetChainPoset& horn, SubsetMask e)
{
    if (e == 0 || (e & ~full_mask(horn.n)) != 0)
        throw std::invalid_argument("preimage_reduction: subset out of range");
    PreimageReduction r;
    const RelPoset& hp = *horn.poset;
    ElementSet pre = pi_preimage(horn, e);
    r.preimage = full_subposet(hp, pre);
    ElementSet c_set, d_set;
    for (ElementId x : pre) {
        const SubsetChain& c = horn.chains[x];
        if ((c.front() & ~e) == 0)
            c_set.push_back(x);
        if ((c.back() & ~e) == 0)
            d_set.push_back(x);
    }
    r.c = full_subposet(hp, c_set);
    r.d_prime = full_subposet(hp, d_set);

    struct ChainsOn {
        std::vector<SubsetChain> chains;
        std::map<SubsetChain, ElementId> index;
        RelPosetPtr poset;
    };
    std::map<SubsetMask, ChainsOn> cache;
    auto chains_on = [&](SubsetMask m) -> const ChainsOn& {
        auto it = cache.find(m);
        if (it != cache.end())
            return it->second;
        ChainsOn co;
        co.chains = enumerate_subset_chains(m);
        for (ElementId a = 0; a < co.chains.size(); ++a)
            co.index[co.chains[a]] = a;
        co.poset = std::make_shared<RelPoset>(RelPoset::minimal(chain_inclusion_poset(co.chains)));
        return cache.emplace(m, std::move(co)).first->second;
    };

    for (ElementId w : pre) {
        const SubsetChain& wc = horn.chains[w];
        const SubsetMask m = wc.front() & e;
        const ChainsOn& dw = chains_on(m);
        ElementSet under;
        for (ElementId v : c_set)
            if (hp.leq(w, v))
                under.push_back(v);
        Subposet wc_sub = full_subposet(hp, under);

        std::vector<ElementId> lambda(dw.chains.size());
        for (ElementId a = 0; a < dw.chains.size(); ++a) {
            SubsetChain u;
            std::set_union(dw.chains[a].begin(), dw.chains[a].end(), wc.begin(), wc.end(), std::back_inserter(u));
            auto id = horn.find(u);
            auto local = id ? wc_sub.local(*id) : std::nullopt;
            if (!local)
                throw std::logic_error("preimage_reduction: concatenation " + format_chain(u) + " leaves W/C");
            lambda[a] = *local;
        }
        std::vector<ElementId> rho(wc_sub.to_parent.size());
        for (ElementId a = 0; a < rho.size(); ++a) {
            SubsetChain prefix;
            for (SubsetMask s : horn.chains[wc_sub.to_parent[a]])
                if ((s & ~m) == 0)
                    prefix.push_back(s);
            auto it = dw.index.find(prefix);
            if (it == dw.index.end())
                throw std::logic_error("preimage_reduction: prefix " + format_chain(prefix) + " is empty");
            rho[a] = it->second;
        }
        r.fibers.push_back(GaloisInstance{"fiber at " + format_chain(wc),
                                          MonotoneMap(dw.poset, wc_sub.poset, std::move(lambda)),
                                          MonotoneMap(wc_sub.poset, dw.poset, std::move(rho))});
    }

    {
        std::vector<ElementId> incl(d_set.size());
        for (ElementId a = 0; a < incl.size(); ++a)
            incl[a] = *r.c.local(d_set[a]);
        std::vector<ElementId> s(c_set.size());
        for (ElementId a = 0; a < s.size(); ++a) {
            SubsetChain prefix;
            for (SubsetMask x : horn.chains[c_set[a]])
                if ((x & ~e) == 0)
                    prefix.push_back(x);
            auto id = horn.find(prefix);
            auto local = id ? r.d_prime.local(*id) : std::nullopt;
            if (!local)
                throw std::logic_error("preimage_reduction: truncation " + format_chain(prefix) + " leaves D'");
            s[a] = *local;
        }
        r.d_prime_in_c = GaloisInstance{"top inside e", MonotoneMap(r.d_prime.poset, r.c.poset, std::move(incl)),
                                        MonotoneMap(r.c.poset, r.d_prime.poset, std::move(s))};
    }

    if (e == full_mask(horn.n)) {
        // D' is the whole horn here; nothing to relabel.
        r.d_prime_iso.ok = d_set.size() == horn.size();
        r.d_prime_iso.size = d_set.size();
        r.d_prime_iso.detail = "whole horn";
    } else {
        const int m = std::popcount(e) - 1;
        auto target = sd2_region(m, Region::Full, -1, nullptr);
        r.d_prime_iso = relabel_iso(
            horn, d_set,
            [&](const SubsetChain& c) { return transform(c, [&](SubsetMask s) { return compress(s, e); }); },
            *target.poset, [&](const SubsetChain& c) { return target.find(c); }, all_elements(*target.poset));
    }
    return r;
}

} // namespace relcat
