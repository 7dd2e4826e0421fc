#include "relcat/verifier.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <chrono>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "relcat/families.hpp"
#include "relcat/filtration.hpp"
#include "relcat/generator.hpp"
#include "relcat/holim_checks.hpp"
#include "relcat/homology.hpp"
#include "relcat/simplicial.hpp"
#include "relcat/subdivision.hpp"

namespace relcat {

std::string to_string(Verdict v)
{
    switch (v) {
    case Verdict::Pass:
        return "pass";
    case Verdict::Fail:
        return "fail";
    case Verdict::Downgraded:
        return "downgraded";
    case Verdict::Skipped:
        return "skipped";
    }
    return "?";
}

nlohmann::json CheckParams::to_json() const
{
    nlohmann::json out = nlohmann::json::object();
    if (n)
        out["n"] = *n;
    if (m)
        out["m"] = *m;
    if (k)
        out["k"] = *k;
    if (we)
        out["we"] = *we;
    if (range)
        out["range"] = *range;
    if (i)
        out["i"] = *i;
    if (j)
        out["j"] = *j;
    out["seeds"] = seeds;
    out["caps"] = caps.to_json();
    out["family"] = family;
    out["side"] = side;
    out["trials"] = trials;
    return out;
}

nlohmann::json ReportEntry::to_json(bool with_timing) const
{
    nlohmann::json j{{"check", check}, {"params", params.to_json()}, {"verdict", to_string(verdict)}, {"evidence", evidence}};
    if (with_timing)
        j["seconds"] = seconds;
    return j;
}

// ---------------------------------------------------------------- dispatch table

const std::vector<CheckInfo>& check_table()
{
    static const std::vector<CheckInfo> table = {
        {"iso", "double subdivision of the linear poset against chains of subsets",
         {"double subdivision is the chain-of-subsets poset", "vertex maps detect marks"},
         true, false, false, true, false},
        {"kappa-id", "cone over the subdivided boundary against the subdivided simplex",
         {"cone over the subdivided boundary is the subdivided simplex"}, true, false, false, true, false},
        {"retraction", "retraction of the subdivided simplex onto the cone over the horn",
         {"retraction onto the cone over the horn"}, true, false, true, true, false},
        {"filtration", "horn filling of a product of simplices, stage by stage",
         {"product of simplices filtered by horns", "lifting reformulation"}, true, true, true, false, true},
        {"contractible", "contractibility verdicts for preimage families and their reductions",
         {"preimages of the vertex map are contractible", "galois connection reductions",
          "xbar isomorphisms and open stars", "y decomposition"},
         true, false, true, false, false},
        {"holim", "holim over the subdivided horn maps to the value at the initial vertex",
         {"holim over the horn maps to the initial vertex", "holim over fibers of the vertex map",
          "reedy fibrant replacement"},
         true, false, true, true, true},
        {"extension", "extension over the cone with the transported marking",
         {"extension over the cone", "fibrancy criterion", "reedy fibrant replacement"}, true, false, true, true,
         true},
        {"thomason", "diagram of quasi-isomorphisms on the horn extends over the cone",
         {"lifting criterion", "holim over a contractible index"}, true, false, false, true, true},
        {"axioms", "fibration category axioms for rational chain complexes", {"fibration category axioms"}, false,
         false, false, false, true},
        {"decomposition", "holim over a union of cosieves as a homotopy pullback",
         {"holim over a cosieve union", "holim along a cofinal inclusion", "pie limit decomposition"}, true, false,
         true, true, true},
    };
    return table;
}

const std::vector<std::string>& required_statements()
{
    static const std::vector<std::string> s = {
        "double subdivision is the chain-of-subsets poset",
        "vertex maps detect marks",
        "cone over the subdivided boundary is the subdivided simplex",
        "retraction onto the cone over the horn",
        "product of simplices filtered by horns",
        "lifting reformulation",
        "preimages of the vertex map are contractible",
        "galois connection reductions",
        "xbar isomorphisms and open stars",
        "y decomposition",
        "fibration category axioms",
        "reedy fibrant replacement",
        "holim over a contractible index",
        "holim along a cofinal inclusion",
        "holim over a cosieve union",
        "pie limit decomposition",
        "holim over fibers of the vertex map",
        "holim over the horn maps to the initial vertex",
        "extension over the cone",
        "fibrancy criterion",
        "lifting criterion",
    };
    return s;
}

// ---------------------------------------------------------------- checks

namespace {

struct Skip : std::runtime_error {
    using std::runtime_error::runtime_error;
};

constexpr std::size_t max_listed = 5;

struct Tally {
    std::size_t instances = 0, passed = 0, failed = 0, downgraded = 0, skipped = 0;
    nlohmann::json failures = nlohmann::json::array();
    nlohmann::json downgrades = nlohmann::json::array();
    nlohmann::json skips = nlohmann::json::array();

    void pass() { ++instances, ++passed; }
    void fail(nlohmann::json why)
    {
        ++instances, ++failed;
        if (failures.size() < max_listed)
            failures.push_back(std::move(why));
    }
    void downgrade(nlohmann::json why)
    {
        ++instances, ++downgraded;
        if (downgrades.size() < max_listed)
            downgrades.push_back(std::move(why));
    }
    void skip(nlohmann::json why)
    {
        ++instances, ++skipped;
        if (skips.size() < max_listed)
            skips.push_back(std::move(why));
    }
    void record(bool ok, nlohmann::json why)
    {
        if (ok)
            pass();
        else
            fail(std::move(why));
    }

    Verdict verdict() const
    {
        if (failed > 0)
            return Verdict::Fail;
        if (downgraded > 0)
            return Verdict::Downgraded;
        if (passed > 0)
            return Verdict::Pass;
        return Verdict::Skipped;
    }

    nlohmann::json to_json() const
    {
        nlohmann::json j{{"instances", instances}, {"passed", passed}, {"failed", failed},
                         {"downgraded", downgraded}, {"skipped", skipped}};
        if (!failures.empty())
            j["failures"] = failures;
        if (!downgrades.empty())
            j["downgrades"] = downgrades;
        if (!skips.empty())
            j["skips"] = skips;
        return j;
    }
};

struct Structure {
    std::string text;
    RelPosetPtr poset;
};

struct Range {
    int lo, hi;
};

int need_n(const CheckParams& p, Range r)
{
    if (!p.n)
        throw Skip("n is required");
    if (*p.n < r.lo || *p.n > r.hi)
        throw Skip("n = " + std::to_string(*p.n) + " outside " + std::to_string(r.lo) + ".." + std::to_string(r.hi));
    return *p.n;
}

std::vector<int> k_values(const CheckParams& p, int n)
{
    if (p.k) {
        if (*p.k < 0 || *p.k > n)
            throw Skip("k = " + std::to_string(*p.k) + " outside 0..n");
        return {*p.k};
    }
    std::vector<int> out;
    for (int k = 0; k <= n; ++k)
        out.push_back(k);
    return out;
}

std::vector<Structure> structures(const CheckParams& p, int n)
{
    std::vector<Structure> out;
    if (p.we) {
        RelPoset s;
        try {
            s = build_simplex(n, parse_structure(*p.we));
        } catch (const std::invalid_argument& e) {
            throw Skip(std::string("structure: ") + e.what());
        }
        out.push_back({format_structure(s), std::make_shared<const RelPoset>(std::move(s))});
        return out;
    }
    for (RelPoset& s : all_relative_structures(n))
        out.push_back({format_structure(s), std::make_shared<const RelPoset>(std::move(s))});
    return out;
}

// Structures meeting the side conditions; the others are counted as
// skipped instances.
std::vector<Structure> admissible_structures(const CheckParams& p, int n, int k, StructureConditions c, Tally& t)
{
    std::vector<Structure> out;
    for (auto& s : structures(p, n)) {
        if (admissible(*s.poset, n, k, c))
            out.push_back(std::move(s));
        else
            t.skip({{"k", k}, {"structure", s.text}, {"reason", "side conditions " + to_string(c)}});
    }
    return out;
}

nlohmann::json where(int k, const std::string& structure)
{
    return {{"k", k}, {"structure", structure}};
}

nlohmann::json where(int k, const std::string& structure, std::uint64_t seed)
{
    return {{"k", k}, {"structure", structure}, {"seed", seed}};
}

void require_generator_caps(const Caps& caps)
{
    if (caps.max_dim < 2)
        throw Skip("caps: the generator needs dim >= 2");
}

// ------------------------------------------------ iso

void run_iso(const CheckParams& p, Tally& t, nlohmann::json& ev)
{
    const int n = need_n(p, {1, 4});
    const auto chains = enumerate_subset_chains(full_mask(n));
    const std::size_t brute = barycentric_subdivision(full_simplex(n)).complex.total();
    ev["chains_of_subsets"] = brute;
    static const std::map<int, std::size_t> stated = {{1, 5}, {2, 25}};
    if (auto it = stated.find(n); it != stated.end()) {
        ev["stated_count"] = it->second;
        t.record(brute == it->second, {{"reason", "count differs from the stated one"}});
    }
    std::map<SubsetChain, ElementId> position;
    for (ElementId a = 0; a < chains.size(); ++a)
        position.emplace(chains[a], a);

    for (const Structure& s : structures(p, n)) {
        const XiPoset xi = subdivide(s.poset, SubdivisionMode::Double);
        const MonotoneMap v = vertex_map(xi);
        const RelPoset& r = *xi.result;
        std::string err;
        std::vector<SubsetChain> flat;
        std::vector<ElementId> to_chains;
        if (r.size() != brute || chains.size() != brute)
            err = "size " + std::to_string(r.size()) + " against " + std::to_string(brute);
        std::set<ElementId> hit;
        for (ElementId e = 0; e < r.size() && err.empty(); ++e) {
            flat.push_back(flatten_double(xi, e));
            auto it = position.find(flat.back());
            if (it == position.end() || !hit.insert(it->second).second)
                err = "no bijection at " + format_chain(flat.back());
            else
                to_chains.push_back(it->second);
            if (err.empty() && static_cast<int>(v(e)) != phi(flat.back()))
                err = "vertex map differs from the smallest bottom element at " + format_chain(flat.back());
        }
        auto as_set = [](SubsetChain c) {
            std::sort(c.begin(), c.end());
            return c;
        };
        std::vector<SubsetChain> sets;
        for (auto& c : flat)
            sets.push_back(as_set(c));
        for (ElementId a = 0; a < sets.size() && err.empty(); ++a)
            for (ElementId b = 0; b < sets.size(); ++b) {
                const bool inc = std::includes(sets[b].begin(), sets[b].end(), sets[a].begin(), sets[a].end());
                if (r.leq(a, b) != inc) {
                    err = "order differs on " + format_chain(flat[a]) + ", " + format_chain(flat[b]);
                    break;
                }
                if (inc && r.marked(a, b) != s.poset->marked(v(a), v(b))) {
                    err = "mark differs on " + format_chain(flat[a]) + ", " + format_chain(flat[b]);
                    break;
                }
            }
        nlohmann::json w{{"structure", s.text}};
        if (!err.empty())
            w["reason"] = err;
        t.record(err.empty(), w);
    }
    ev["elements"] = brute;
}

// ------------------------------------------------ kappa-id

void run_kappa_id(const CheckParams& p, Tally& t, nlohmann::json& ev)
{
    const int n = need_n(p, {1, 3});
    for (const Structure& s : structures(p, n)) {
        std::string err;
        try {
            const KappaIdentification id = identify_kappa_boundary(n, s.poset);
            ev["cone_size"] = id.cone.poset.size();
            ev["boundary_size"] = id.boundary.size();
            if (!is_order_isomorphism(*id.marked_cone, *id.full.poset, id.to_full, true))
                err = "not an isomorphism of relative posets";
            const std::size_t sz = id.cone.poset.size();
            for (ElementId x = 0; x < sz && err.empty(); ++x)
                for (ElementId y = 0; y < sz; ++y)
                    if (id.cone.poset.leq(x, y) &&
                        id.marked_cone->marked(x, y) != kappa_mark_description(id.cone, id.boundary, *s.poset, x, y)) {
                        err = "mark on " + id.cone.poset.label(x) + " -> " + id.cone.poset.label(y) +
                              " differs from the vertex map description";
                        break;
                    }
        } catch (const std::logic_error& e) {
            err = e.what();
        }
        nlohmann::json w{{"structure", s.text}};
        if (!err.empty())
            w["reason"] = err;
        t.record(err.empty(), w);
    }
}

// ------------------------------------------------ retraction

void run_retraction(const CheckParams& p, Tally& t, nlohmann::json& ev)
{
    const int n = need_n(p, {1, 3});
    ev["hypotheses"] = to_string(StructureConditions::BothEdges);
    for (int k : k_values(p, n))
        for (const Structure& s : admissible_structures(p, n, k, StructureConditions::BothEdges, t)) {
            const Retraction r = retraction_r(n, k, s.poset);
            nlohmann::json w = where(k, s.text);
            if (!r.report.ok())
                w["report"] = r.report.to_json();
            t.record(r.report.ok(), w);
        }
}

// ------------------------------------------------ filtration

void run_filtration(const CheckParams& p, Tally& t, nlohmann::json& ev)
{
    const int n = need_n(p, {1, 6});
    if (!p.m || *p.m < 0)
        throw Skip("m >= 0 is required");
    const int m = *p.m;
    if (n + m > 6)
        throw Skip("n + m above 6");
    std::vector<Side> sides;
    if (p.side == "left" || p.side == "both")
        sides.push_back(Side::Left);
    if (p.side == "right" || p.side == "both")
        sides.push_back(Side::Right);
    if (sides.empty())
        throw Skip("side must be left, right or both");
    nlohmann::json runs = nlohmann::json::array();
    for (int k : k_values(p, n))
        for (Side side : sides) {
            nlohmann::json w{{"k", k}, {"side", to_string(side)}};
            if ((side == Side::Left && k >= n) || (side == Side::Right && k == 0)) {
                w["reason"] = side == Side::Left ? "left case needs k < n" : "right case needs k > 0";
                t.skip(w);
                continue;
            }
            const FiltrationReport r = filtration_check(n, m, k, side);
            std::string err = r.ok ? validate_filtration(r) : r.failure;
            for (std::uint64_t seed : p.seeds) {
                if (!err.empty())
                    break;
                const FiltrationReport shuffled = filtration_check(n, m, k, side, seed);
                err = shuffled.ok ? validate_filtration(shuffled) : shuffled.failure;
                if (err.empty() && (shuffled.attached != r.attached || shuffled.missing_faces != r.missing_faces))
                    err = "shuffled order attaches a different number of cells";
                if (!err.empty())
                    w["shuffle_seed"] = seed;
            }
            w["attached"] = r.attached;
            w["start_cells"] = r.y0_cells;
            w["total_cells"] = r.total_cells;
            if (!err.empty())
                w["reason"] = err;
            runs.push_back({{"k", k}, {"side", to_string(side)}, {"attached", r.attached}, {"stages", r.stages.size()}});
            t.record(err.empty(), w);
        }
    ev["runs"] = runs;
}

// ------------------------------------------------ contractible

std::string family_key(std::string f)
{
    std::transform(f.begin(), f.end(), f.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (f == "pi-preimage" || f == "pi_preimage")
        return "pi";
    return f;
}

SubsetMask parse_range(const std::string& text, int n)
{
    const auto dots = text.find("..");
    int lo = 0, hi = 0;
    try {
        if (dots == std::string::npos) {
            lo = hi = std::stoi(text);
        } else {
            lo = std::stoi(text.substr(0, dots));
            hi = std::stoi(text.substr(dots + 2));
        }
    } catch (const std::exception&) {
        throw Skip("range must look like lo..hi");
    }
    if (lo < 0 || hi > n || lo > hi)
        throw Skip("range " + text + " outside 0..n");
    SubsetMask m = 0;
    for (int v = lo; v <= hi; ++v)
        m |= SubsetMask{1} << v;
    return m;
}

bool family_selected(const CheckParams& p, const std::string& family, const FamilySelector& sel, int n)
{
    switch (sel.kind) {
    case FamilyKind::PiPreimage:
        if (family != "all" && family != "pi")
            return false;
        return !p.range || sel.e == parse_range(*p.range, n);
    case FamilyKind::X:
        return (family == "all" || family == "x") && (!p.i || *p.i == sel.i);
    case FamilyKind::Xbar:
        return (family == "all" || family == "xbar") && (!p.i || *p.i == sel.i);
    case FamilyKind::Y:
        return family == "all" || family == "y";
    }
    return false;
}

void run_contractible(const CheckParams& p, Tally& t, nlohmann::json& ev)
{
    static const std::set<std::string> families = {"all", "pi", "x", "xbar", "y", "galois"};
    const std::string family = family_key(p.family);
    if (!families.count(family))
        throw Skip("unknown family " + p.family);
    const int n = need_n(p, {1, 4});
    std::map<std::string, std::size_t> verdicts;
    for (int k : k_values(p, n)) {
        const SubsetChainPoset horn = sd2_region(n, Region::Horn, k, nullptr);
        std::size_t selected = 0;
        for (const FamilySelector& sel : contractible_selectors(n, k)) {
            if (!family_selected(p, family, sel, n))
                continue;
            ++selected;
            const Family fam = preimage_family(horn, sel);
            const ContractibilityVerdict v = contractibility_verdict(nerve(fam.sub.poset->poset()));
            ++verdicts[to_string(v.kind)];
            nlohmann::json w{{"k", k}, {"family", sel.describe()}, {"size", fam.sub.poset->size()},
                             {"verdict", to_string(v.kind)}};
            std::string err;
            if (sel.kind == FamilyKind::Xbar) {
                if (!(fam.lambda && fam.inclusion && check_galois_connection(*fam.lambda, *fam.inclusion)))
                    err = "retraction onto Xbar is not left adjoint to the inclusion";
                const IsoCheck iso = check_xbar_isomorphism(horn, sel.i);
                if (err.empty() && !iso.ok)
                    err = "Xbar isomorphism: " + iso.detail;
                if (err.empty()) {
                    const XbarAmbient amb = xbar_ambient(horn, sel.i);
                    std::vector<char> face(amb.ambient.chains.size(), 0);
                    for (ElementId a : amb.face)
                        face[a] = 1;
                    if (!amb.face.empty() && amb.face.size() < amb.ambient.chains.size()) {
                        const OpenStarCheck os = open_star_check(nerve(amb.ambient.poset->poset()), face);
                        if (!os.agree())
                            err = "removing the face and its open star give different homology";
                    }
                }
            }
            if (sel.kind == FamilyKind::Y) {
                const YDecomposition y = decompose_y(horn);
                if (!y.ok())
                    err = "Y decomposition does not hold";
            }
            if (!err.empty()) {
                w["reason"] = err;
                t.fail(w);
            } else if (v.kind == VerdictKind::NonAcyclic) {
                w["homology"] = v.homology.summary();
                t.fail(w);
            } else if (v.kind == VerdictKind::AcyclicOnly) {
                w["homology"] = v.homology.summary();
                t.downgrade(w);
            } else {
                t.pass();
            }
        }
        if (selected == 0 && family != "galois")
            t.skip({{"k", k}, {"family", p.family}, {"reason", "no instance claimed contractible at this k"}});
        if (family != "all" && family != "galois")
            continue;
        // Reductions of the preimages to subdivided simplices.
        for (const FamilySelector& sel : contractible_selectors(n, k)) {
            if (sel.kind != FamilyKind::PiPreimage || (p.range && sel.e != parse_range(*p.range, n)))
                continue;
            const PreimageReduction red = preimage_reduction(horn, sel.e);
            std::string err;
            std::size_t instances = 0;
            auto compare = [&](const GaloisInstance& g) {
                ++instances;
                if (!check_galois_connection(g.lambda, g.rho)) {
                    err = g.name + " is not a Galois connection";
                    return;
                }
                if (!(reduced_homology(nerve(g.lambda.source()->poset())) ==
                      reduced_homology(nerve(g.rho.source()->poset()))))
                    err = g.name + ": nerves have different homology";
            };
            for (const GaloisInstance& g : red.fibers) {
                compare(g);
                if (!err.empty())
                    break;
            }
            if (err.empty() && red.d_prime_in_c)
                compare(*red.d_prime_in_c);
            if (err.empty() && !red.d_prime_iso.ok)
                err = "D' is not the subdivided simplex: " + red.d_prime_iso.detail;
            if (err.empty() && !(reduced_homology(nerve(red.preimage.poset->poset())) ==
                                 reduced_homology(nerve(red.d_prime.poset->poset()))))
                err = "preimage and D' have different homology";
            nlohmann::json w{{"k", k}, {"reduction", sel.describe()}, {"adjunctions", instances}};
            if (!err.empty())
                w["reason"] = err;
            t.record(err.empty(), w);
        }
    }
    ev["verdicts"] = verdicts;
}

// ------------------------------------------------ holim

void run_holim(const CheckParams& p, Tally& t, nlohmann::json& ev)
{
    const int n = need_n(p, {2, 3});
    require_generator_caps(p.caps);
    ev["hypotheses"] = to_string(StructureConditions::TopEdge);
    std::size_t max_dim = 0;
    for (int k : k_values(p, n))
        for (const Structure& s : admissible_structures(p, n, k, StructureConditions::TopEdge, t)) {
            const SubsetChainPoset horn = sd2_region(n, Region::Horn, k, s.poset);
            for (std::uint64_t seed : p.seeds) {
                const RelativeDiagram rd = gen_relative_diagram(horn, seed, p.caps);
                const HolimPropReport r = check_holim_prop(horn, rd.diagram);
                max_dim = std::max(max_dim, r.holim_dim);
                nlohmann::json w = where(k, s.text, seed);
                if (!r.ok) {
                    w["report"] = r.to_json();
                    w["diagram"] = rd.diagram->to_json();
                }
                t.record(r.ok, w);
            }
        }
    ev["max_holim_dim"] = max_dim;
}

// ------------------------------------------------ extension

void run_extension(const CheckParams& p, Tally& t, nlohmann::json& ev)
{
    const int n = need_n(p, {2, 3});
    require_generator_caps(p.caps);
    ev["hypotheses"] = to_string(StructureConditions::TopEdge);
    std::size_t apex_pairs = 0, apex_qiso = 0, direct = 0, unsaturated = 0;
    ExtensionOptions opts;
    opts.full_functoriality = n <= 2;
    for (int k : k_values(p, n))
        for (const Structure& s : admissible_structures(p, n, k, StructureConditions::TopEdge, t)) {
            const KappaHorn kh = kappa_horn(n, k, s.poset);
            for (std::uint64_t seed : p.seeds) {
                const ExtensionReport r = check_extension(kh, seed, p.caps, opts);
                apex_pairs += r.apex.pairs;
                apex_qiso += r.apex.quasi_isos;
                direct += r.direct_apex_checks;
                unsaturated += !r.saturated;
                nlohmann::json w = where(k, s.text, seed);
                if (!r.ok)
                    w["report"] = r.to_json();
                t.record(r.ok, w);
            }
        }
    ev["apex_arrows"] = apex_pairs;
    ev["apex_quasi_isos"] = apex_qiso;
    ev["apex_direct_checks"] = direct;
    ev["unsaturated_instances"] = unsaturated;
}

// ------------------------------------------------ thomason

void run_thomason(const CheckParams& p, Tally& t, nlohmann::json& ev)
{
    const int n = need_n(p, {2, 3});
    require_generator_caps(p.caps);
    ExtensionOptions opts;
    opts.full_functoriality = n <= 2;
    for (const Structure& s : admissible_structures(p, n, n, StructureConditions::TopEdge, t))
        for (std::uint64_t seed : p.seeds) {
            const ThomasonReport r = check_thomason(n, s.poset, seed, p.caps, opts);
            nlohmann::json w = where(n, s.text, seed);
            if (!r.ok)
                w["report"] = r.to_json();
            t.record(r.ok, w);
        }
    nlohmann::json indexes = nlohmann::json::array();
    for (const NamedIndex& idx : contractible_indexes()) {
        indexes.push_back(idx.name);
        for (std::uint64_t seed : p.seeds) {
            const ContractibleHolimReport r = check_contractible_holim(idx, seed, p.caps);
            nlohmann::json w{{"index", idx.name}, {"seed", seed}};
            if (!r.ok)
                w["report"] = r.to_json();
            t.record(r.ok, w);
        }
    }
    ev["contractible_indexes"] = indexes;
}

// ------------------------------------------------ axioms

void run_axioms(const CheckParams& p, Tally& t, nlohmann::json& ev)
{
    std::size_t hits = 0;
    for (std::uint64_t seed : p.seeds) {
        const AxiomsReport r = check_axioms(seed, p.trials, p.caps);
        hits += r.six_hypothesis_hits;
        nlohmann::json w{{"seed", seed}};
        if (!r.ok)
            w["report"] = r.to_json();
        t.record(r.ok, w);
    }
    ev["six_hypothesis_hits"] = hits;
}

// ------------------------------------------------ decomposition

void run_decomposition(const CheckParams& p, Tally& t, nlohmann::json& ev)
{
    const int n = need_n(p, {2, 3});
    require_generator_caps(p.caps);
    std::vector<std::pair<int, int>> pairs;
    for (int i = 1; i <= n; ++i)
        for (int j = 0; j < i; ++j)
            if ((!p.i || *p.i == i) && (!p.j || *p.j == j))
                pairs.emplace_back(i, j);
    if (pairs.empty())
        throw Skip("no pair with 0 <= j < i <= n selected");
    const bool cross = n == 2;
    ev["cross_validated"] = cross;
    for (int k : k_values(p, n))
        for (const Structure& s : structures(p, n)) {
            const SubsetChainPoset horn = sd2_region(n, Region::Horn, k, s.poset);
            for (std::uint64_t seed : p.seeds) {
                const RelativeDiagram rd = gen_relative_diagram(horn, seed, p.caps);
                for (auto [i, j] : pairs) {
                    const DecompositionReport r = check_decomposition(horn, rd.diagram, i, j, cross);
                    nlohmann::json w = where(k, s.text, seed);
                    w["i"] = i;
                    w["j"] = j;
                    if (!r.ok)
                        w["report"] = r.to_json();
                    t.record(r.ok, w);
                }
            }
        }
}

using Runner = void (*)(const CheckParams&, Tally&, nlohmann::json&);

const std::map<std::string, Runner>& runners()
{
    static const std::map<std::string, Runner> r = {
        {"iso", run_iso},           {"kappa-id", run_kappa_id}, {"retraction", run_retraction},
        {"filtration", run_filtration}, {"contractible", run_contractible}, {"holim", run_holim},
        {"extension", run_extension}, {"thomason", run_thomason}, {"axioms", run_axioms},
        {"decomposition", run_decomposition},
    };
    return r;
}

} // namespace

ReportEntry run_check(const std::string& name, const CheckParams& params)
{
    auto it = runners().find(name);
    if (it == runners().end())
        throw std::invalid_argument("unknown check '" + name + "'");
    ReportEntry e;
    e.check = name;
    e.params = params;
    const auto start = std::chrono::steady_clock::now();
    Tally t;
    nlohmann::json extra = nlohmann::json::object();
    try {
        it->second(params, t, extra);
        e.verdict = t.verdict();
        e.evidence = t.to_json();
    } catch (const Skip& s) {
        e.verdict = Verdict::Skipped;
        e.evidence = {{"reason", s.what()}};
    } catch (const std::exception& ex) {
        e.verdict = Verdict::Fail;
        e.evidence = t.to_json();
        e.evidence["error"] = ex.what();
    }
    for (auto& [key, v] : extra.items())
        e.evidence[key] = v;
    e.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return e;
}

// ---------------------------------------------------------------- suites

namespace {

std::pair<int, int> read_range(const nlohmann::json& j, const std::string& key)
{
    std::pair<int, int> r;
    if (j.is_number_integer()) {
        r = {j.get<int>(), j.get<int>()};
    } else if (j.is_array() && j.size() == 2) {
        r = {j[0].get<int>(), j[1].get<int>()};
    } else {
        throw std::invalid_argument("suite: '" + key + "' must be an integer or [lo, hi]");
    }
    if (r.first > r.second)
        throw std::invalid_argument("suite: empty range for '" + key + "'");
    return r;
}

} // namespace

SuiteConfig SuiteConfig::from_json(const nlohmann::json& j)
{
    if (!j.is_object())
        throw std::invalid_argument("suite: config must be an object");
    static const std::set<std::string> keys = {"checks", "n",  "m",       "k",       "structures", "seeds", "caps",
                                               "family", "side", "trials", "workers", "format",     "output", "timing"};
    for (auto& [key, v] : j.items())
        if (!keys.count(key))
            throw std::invalid_argument("suite: unknown key '" + key + "'");
    SuiteConfig c;
    try {
        if (j.contains("checks"))
            c.checks = j.at("checks").get<std::vector<std::string>>();
        if (j.contains("n"))
            c.n = read_range(j.at("n"), "n");
        if (j.contains("m"))
            c.m = read_range(j.at("m"), "m");
        if (j.contains("k") && !(j.at("k").is_string() && j.at("k") == "all"))
            c.k = read_range(j.at("k"), "k");
        if (j.contains("structures") && !(j.at("structures").is_string() && j.at("structures") == "all"))
            c.structures = j.at("structures").get<std::vector<std::string>>();
        if (j.contains("seeds"))
            c.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
        if (j.contains("caps"))
            c.caps = j.at("caps").is_string()
                         ? Caps::parse(j.at("caps").get<std::string>())
                         : Caps{j.at("caps").value("min_degree", 0), j.at("caps").value("max_degree", 4),
                                j.at("caps").value("max_dim", std::size_t{6})};
        c.family = j.value("family", c.family);
        c.side = j.value("side", c.side);
        c.trials = j.value("trials", c.trials);
        c.workers = j.value("workers", c.workers);
        c.format = j.value("format", c.format);
        c.output = j.value("output", c.output);
        c.timing = j.value("timing", c.timing);
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("suite: ") + e.what());
    }
    if (c.seeds.empty())
        throw std::invalid_argument("suite: seeds must be listed explicitly");
    if (c.structures && c.structures->empty())
        throw std::invalid_argument("suite: empty structure list");
    if (c.format != "json" && c.format != "text")
        throw std::invalid_argument("suite: format must be json or text");
    if (c.workers == 0)
        c.workers = 1;
    for (const auto& name : c.checks)
        if (!runners().count(name))
            throw std::invalid_argument("suite: unknown check '" + name + "'");
    return c;
}

nlohmann::json SuiteConfig::to_json() const
{
    nlohmann::json j{{"checks", checks},   {"n", {n.first, n.second}}, {"m", {m.first, m.second}},
                     {"seeds", seeds},     {"caps", caps.to_json()},   {"family", family},
                     {"side", side},       {"trials", trials},         {"workers", workers},
                     {"format", format},   {"output", output},         {"timing", timing}};
    j["k"] = k ? nlohmann::json{k->first, k->second} : nlohmann::json("all");
    j["structures"] = structures ? nlohmann::json(*structures) : nlohmann::json("all");
    return j;
}

std::vector<std::pair<std::string, CheckParams>> expand_suite(const SuiteConfig& config)
{
    std::vector<std::pair<std::string, CheckParams>> jobs;
    CheckParams base;
    base.seeds = config.seeds;
    base.caps = config.caps;
    base.family = config.family;
    base.side = config.side;
    base.trials = config.trials;
    for (const auto& name : config.checks) {
        auto info = std::find_if(check_table().begin(), check_table().end(),
                                 [&](const CheckInfo& c) { return c.name == name; });
        if (info == check_table().end())
            throw std::invalid_argument("suite: unknown check '" + name + "'");
        if (!info->uses_n) {
            jobs.emplace_back(name, base);
            continue;
        }
        for (int n = config.n.first; n <= config.n.second; ++n) {
            std::vector<std::optional<int>> ms{std::nullopt};
            if (info->uses_m) {
                ms.clear();
                for (int m = config.m.first; m <= config.m.second; ++m)
                    ms.push_back(m);
            }
            std::vector<std::optional<int>> ks{std::nullopt};
            if (info->uses_k) {
                ks.clear();
                const int lo = config.k ? config.k->first : 0, hi = config.k ? config.k->second : n;
                for (int k = lo; k <= hi; ++k)
                    ks.push_back(k);
            }
            std::vector<std::optional<std::string>> ws{std::nullopt};
            if (info->uses_structure && config.structures) {
                ws.clear();
                for (const auto& s : *config.structures)
                    ws.push_back(s);
            }
            for (auto& m : ms)
                for (auto& k : ks)
                    for (auto& w : ws) {
                        CheckParams p = base;
                        p.n = n;
                        p.m = m;
                        p.k = k;
                        p.we = w;
                        jobs.emplace_back(name, p);
                    }
        }
    }
    return jobs;
}

std::vector<ReportEntry> run_jobs(const std::vector<std::pair<std::string, CheckParams>>& jobs, unsigned workers)
{
    std::vector<ReportEntry> out(jobs.size());
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < jobs.size(); i = next++)
            out[i] = run_check(jobs[i].first, jobs[i].second);
    };
    const unsigned count = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(jobs.size())));
    std::vector<std::thread> pool;
    for (unsigned w = 1; w < count; ++w)
        pool.emplace_back(work);
    work();
    for (auto& th : pool)
        th.join();
    return out;
}

std::vector<ReportEntry> run_suite(const SuiteConfig& config)
{
    return run_jobs(expand_suite(config), config.workers);
}

nlohmann::json report_json(const std::vector<ReportEntry>& entries, bool with_timing)
{
    std::map<std::string, std::size_t> counts = {{"pass", 0}, {"fail", 0}, {"downgraded", 0}, {"skipped", 0}};
    nlohmann::json list = nlohmann::json::array();
    for (std::size_t i = 0; i < entries.size(); ++i) {
        nlohmann::json e = entries[i].to_json(with_timing);
        e["id"] = i;
        list.push_back(std::move(e));
        ++counts[to_string(entries[i].verdict)];
    }
    return {{"entries", list}, {"summary", counts}};
}

std::string report_text(const std::vector<ReportEntry>& entries, bool with_timing)
{
    std::ostringstream os;
    for (const auto& e : entries) {
        os << e.check;
        const auto& p = e.params;
        if (p.n)
            os << " n=" << *p.n;
        if (p.m)
            os << " m=" << *p.m;
        if (p.k)
            os << " k=" << *p.k;
        if (p.we)
            os << " we=" << (p.we->empty() ? "none" : *p.we);
        os << ": " << to_string(e.verdict);
        if (e.evidence.contains("instances"))
            os << " (" << e.evidence["instances"].get<std::size_t>() << " instances, "
               << e.evidence["failed"].get<std::size_t>() << " failed, "
               << e.evidence["downgraded"].get<std::size_t>() << " downgraded, "
               << e.evidence["skipped"].get<std::size_t>() << " skipped)";
        if (e.evidence.contains("reason"))
            os << " " << e.evidence["reason"].get<std::string>();
        if (e.evidence.contains("error"))
            os << " error: " << e.evidence["error"].get<std::string>();
        if (with_timing)
            os << " [" << e.seconds << " s]";
        os << '\n';
        if (e.verdict == Verdict::Fail && e.evidence.contains("failures"))
            for (const auto& f : e.evidence["failures"])
                os << "  " << f.dump() << '\n';
    }
    return os.str();
}

int exit_code(const std::vector<ReportEntry>& entries)
{
    return std::any_of(entries.begin(), entries.end(), [](const ReportEntry& e) { return e.verdict == Verdict::Fail; })
               ? 1
               : 0;
}

} // namespace relcat
