// Acceptance run: one line per criterion with its budget.
#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "relcat/families.hpp"
#include "relcat/holim_checks.hpp"
#include "relcat/homology.hpp"
#include "relcat/simplicial.hpp"
#include "relcat/verifier.hpp"

using namespace relcat;

namespace {

struct Outcome {
    bool ok = true;
    std::string detail;
};

struct Part {
    std::string label;
    double budget;
    std::function<Outcome()> run;
};

double seconds_since(std::chrono::steady_clock::time_point t)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t).count();
}

std::vector<std::uint64_t> seeds(std::uint64_t count)
{
    std::vector<std::uint64_t> s;
    for (std::uint64_t i = 1; i <= count; ++i)
        s.push_back(i);
    return s;
}

// Runs a check and accepts pass (and downgraded when allowed).
Outcome through_verifier(const std::string& name, CheckParams p, bool allow_downgrade = false)
{
    ReportEntry e = run_check(name, p);
    Outcome o;
    o.ok = e.verdict == Verdict::Pass || (allow_downgrade && e.verdict == Verdict::Downgraded);
    const auto& ev = e.evidence;
    if (ev.contains("instances"))
        o.detail = std::to_string(ev["passed"].get<std::size_t>()) + "/" +
                   std::to_string(ev["instances"].get<std::size_t>()) + " passed";
    if (ev.value("downgraded", std::size_t{0}) > 0)
        o.detail += ", " + std::to_string(ev["downgraded"].get<std::size_t>()) + " acyclic only";
    if (ev.value("skipped", std::size_t{0}) > 0)
        o.detail += ", " + std::to_string(ev["skipped"].get<std::size_t>()) + " skipped by side conditions";
    if (!o.ok)
        o.detail += " verdict " + to_string(e.verdict) + ": " + ev.dump().substr(0, 2000);
    return o;
}

Outcome all_of(std::vector<Outcome> parts)
{
    Outcome o;
    for (auto& p : parts) {
        o.ok = o.ok && p.ok;
        if (!o.detail.empty())
            o.detail += "; ";
        o.detail += p.detail;
    }
    return o;
}

CheckParams params(int n)
{
    CheckParams p;
    p.n = n;
    return p;
}

Outcome criterion_iso()
{
    std::vector<Outcome> parts;
    for (int n = 1; n <= 3; ++n) {
        Outcome o = through_verifier("iso", params(n));
        ReportEntry e = run_check("iso", params(n));
        o.detail = "n=" + std::to_string(n) + " " + std::to_string(e.evidence["elements"].get<std::size_t>()) +
                   " objects, " + o.detail;
        parts.push_back(o);
    }
    return all_of(parts);
}

Outcome per_n(const std::string& check, int lo, int hi, bool allow_downgrade = false)
{
    std::vector<Outcome> parts;
    for (int n = lo; n <= hi; ++n) {
        Outcome o = through_verifier(check, params(n), allow_downgrade);
        o.detail = "n=" + std::to_string(n) + " " + o.detail;
        parts.push_back(o);
    }
    return all_of(parts);
}

Outcome criterion_filtration()
{
    std::vector<Outcome> parts;
    std::size_t runs = 0;
    bool ok = true;
    std::string failures;
    for (int n = 1; n <= 5; ++n)
        for (int m = 0; n + m <= 5; ++m) {
            CheckParams p = params(n);
            p.m = m;
            ReportEntry e = run_check("filtration", p);
            runs += e.evidence.value("passed", std::size_t{0});
            if (e.verdict != Verdict::Pass) {
                ok = false;
                failures += " (n=" + std::to_string(n) + ",m=" + std::to_string(m) + ") " + e.evidence.dump();
            }
        }
    return {ok, std::to_string(runs) + " (n, m, k, side) runs with exact cell accounting" + failures};
}

bool is_sphere(const HomologyReport& h, int d)
{
    bool top = false;
    for (const auto& x : h.dims) {
        if (!x.torsion.empty() || x.betti != (x.dim == d ? 1U : 0U))
            return false;
        top = top || (x.dim == d && x.betti == 1);
    }
    return top;
}

Outcome criterion_spheres()
{
    Outcome o;
    for (int n = 1; n <= 4; ++n) {
        SubsetChainPoset b = sd2_region(n, Region::Boundary, -1, nullptr);
        HomologyReport h = reduced_homology(nerve(b.poset->poset()));
        const bool ok = is_sphere(h, n - 1);
        o.ok = o.ok && ok;
        o.detail += (n > 1 ? "; " : "") + std::string("n=") + std::to_string(n) + " " + h.summary();
    }
    return o;
}

Outcome criterion_holim_indexes()
{
    std::vector<Outcome> parts;
    // contractible indexes, every arrow a quasi-isomorphism
    Outcome a;
    std::size_t count = 0;
    for (const NamedIndex& idx : contractible_indexes())
        for (std::uint64_t seed = 1; seed <= 5; ++seed) {
            ContractibleHolimReport r = check_contractible_holim(idx, seed, Caps{});
            ++count;
            if (!r.ok) {
                a.ok = false;
                a.detail += " " + r.to_json().dump();
            }
        }
    a.detail = "(a) " + std::to_string(contractible_indexes().size()) + " indexes, " + std::to_string(count) +
               " diagrams" + a.detail;
    parts.push_back(a);
    // cofinal inclusion and cosieve union, every k and structure at n = 2
    Outcome bc;
    std::size_t cofinal = 0, unions = 0;
    for (int k = 0; k <= 2; ++k)
        for (const RelPoset& s : all_relative_structures(2)) {
            SubsetChainPoset horn = sd2_region(2, Region::Horn, k, std::make_shared<const RelPoset>(s));
            for (std::uint64_t seed = 1; seed <= 3; ++seed) {
                RelativeDiagram rd = gen_relative_diagram(horn, seed, Caps{});
                for (int i = 1; i <= 2; ++i)
                    for (int j = 0; j < i; ++j) {
                        DecompositionReport r = check_decomposition(horn, rd.diagram, i, j, true);
                        for (const auto& st : r.steps) {
                            if (st.name == "cofinal inclusion")
                                cofinal += st.ok;
                            if (st.name == "union to homotopy pullback")
                                unions += st.ok;
                        }
                        if (!r.ok || r.holim_homology != r.pullback_homology) {
                            bc.ok = false;
                            bc.detail += " " + r.to_json().dump();
                        }
                    }
            }
        }
    bc.detail = "(b) " + std::to_string(cofinal) + " cofinal inclusions, (c) " + std::to_string(unions) +
                " cosieve unions" + bc.detail;
    parts.push_back(bc);
    return all_of(parts);
}

Outcome seeded(const std::string& check, int n)
{
    CheckParams p = params(n);
    p.seeds = seeds(20);
    Outcome o = through_verifier(check, p);
    o.detail = "n=" + std::to_string(n) + " " + o.detail;
    return o;
}

Outcome extension_detail(int n)
{
    CheckParams p = params(n);
    p.seeds = seeds(20);
    ReportEntry e = run_check("extension", p);
    Outcome o;
    o.ok = e.verdict == Verdict::Pass;
    const auto& ev = e.evidence;
    o.detail = "n=" + std::to_string(n) + " " + std::to_string(ev.value("passed", std::size_t{0})) + "/" +
               std::to_string(ev.value("instances", std::size_t{0})) + " passed, apex arrows " +
               std::to_string(ev.value("apex_quasi_isos", std::size_t{0})) + " quasi-isos of " +
               std::to_string(ev.value("apex_arrows", std::size_t{0})) + ", " +
               std::to_string(ev.value("unsaturated_instances", std::size_t{0})) +
               " instances on unsaturated structures (marks imply quasi-isos there; exact match not possible)";
    if (!o.ok)
        o.detail += " " + ev.dump().substr(0, 2000);
    return o;
}

} // namespace

int main()
{
    struct Criterion {
        int id;
        std::string name;
        std::vector<Part> parts;
    };
    const std::vector<Criterion> criteria = {
        {1, "subdivision identification", {{"n<=3", 10, criterion_iso}}},
        {2, "cone identification", {{"n<=3", 30, [] { return per_n("kappa-id", 1, 3); }}}},
        {3, "retraction", {{"n<=3", 60, [] { return per_n("retraction", 1, 3); }}}},
        {4, "filtration", {{"n+m<=5", 120, criterion_filtration}}},
        {5,
         "contractibility",
         {{"n<=3", 60, [] { return per_n("contractible", 1, 3, true); }},
          {"n=4", 600, [] { return per_n("contractible", 4, 4, true); }}}},
        {6, "sphere homology", {{"n<=4", 60, criterion_spheres}}},
        {7, "holim over special indexes", {{"all", 120, criterion_holim_indexes}}},
        {8,
         "holim over the horn",
         {{"n=2", 60, [] { return seeded("holim", 2); }}, {"n=3", 900, [] { return seeded("holim", 3); }}}},
        {9,
         "extension over the cone",
         {{"n=2", 60, [] { return extension_detail(2); }}, {"n=3", 900, [] { return extension_detail(3); }}}},
    };

    bool all = true;
    for (const Criterion& c : criteria) {
        bool ok = true;
        std::string line;
        for (const Part& p : c.parts) {
            const auto start = std::chrono::steady_clock::now();
            Outcome o;
            try {
                o = p.run();
            } catch (const std::exception& e) {
                o = {false, std::string("exception: ") + e.what()};
            }
            const double t = seconds_since(start);
            const bool in_budget = t <= p.budget;
            ok = ok && o.ok && in_budget;
            char timing[96];
            std::snprintf(timing, sizeof timing, "%.1fs of %.0fs", t, p.budget);
            line += " [" + p.label + " " + timing + (in_budget ? "" : " OVER BUDGET") + "] " + o.detail;
        }
        all = all && ok;
        std::printf("criterion %d %s: %s%s\n", c.id, c.name.c_str(), ok ? "PASS" : "FAIL", line.c_str());
        std::fflush(stdout);
    }
    return all ? 0 : 1;
}
