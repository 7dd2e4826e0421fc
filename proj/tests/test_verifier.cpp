#include <doctest.h>

#include <set>

#include "relcat/verifier.hpp"

using namespace relcat;

namespace {

CheckParams with_n(int n)
{
    CheckParams p;
    p.n = n;
    return p;
}

} // namespace

TEST_CASE("iso at n = 2 gives the 25 element bijection")
{
    ReportEntry e = run_check("iso", with_n(2));
    CHECK(e.verdict == Verdict::Pass);
    CHECK(e.evidence["elements"] == 25);
    CHECK(e.evidence["failed"] == 0);
}

TEST_CASE("retraction example through the dispatcher")
{
    CheckParams p = with_n(2);
    p.k = 0;
    p.we = "0-1";
    ReportEntry e = run_check("retraction", p);
    CHECK(e.verdict == Verdict::Pass);
    CHECK(e.evidence["instances"] == 1);
}

TEST_CASE("Y family at n = 2")
{
    CheckParams p = with_n(2);
    p.family = "Y";
    ReportEntry e = run_check("contractible", p);
    CHECK((e.verdict == Verdict::Pass || e.verdict == Verdict::Downgraded));
    // k = 0 and k = 1 have no Y instance and say so
    CHECK(e.evidence["skipped"] == 2);
}

TEST_CASE("inadmissible structures are reported as skips")
{
    CheckParams p = with_n(2);
    p.k = 0;
    p.we = "1-2";
    ReportEntry e = run_check("retraction", p);
    CHECK(e.verdict == Verdict::Skipped);
    CHECK(e.evidence["skipped"] == 1);
}

TEST_CASE("unknown checks and out of range parameters")
{
    CHECK_THROWS_AS(run_check("nope", with_n(1)), std::invalid_argument);
    ReportEntry e = run_check("holim", with_n(7));
    CHECK(e.verdict == Verdict::Skipped);
    CHECK(e.evidence.contains("reason"));
    CHECK(run_check("iso", CheckParams{}).verdict == Verdict::Skipped);
    CheckParams bad = with_n(2);
    bad.we = "0-5";
    CHECK(run_check("iso", bad).verdict == Verdict::Skipped);
    CheckParams tiny = with_n(2);
    tiny.caps.max_dim = 1;
    CHECK(run_check("holim", tiny).verdict == Verdict::Skipped);
}

TEST_CASE("every check is reachable and every statement is covered")
{
    std::set<std::string> covered;
    for (const CheckInfo& c : check_table()) {
        for (const auto& s : c.statements)
            covered.insert(s);
        CheckParams p = with_n(1);
        p.m = 0;
        p.seeds = {1};
        p.trials = 2;
        CHECK_NOTHROW(run_check(c.name, p));
    }
    for (const auto& s : required_statements()) {
        CAPTURE(s);
        CHECK(covered.count(s) == 1);
    }
    CHECK(check_table().size() == 10);
}

TEST_CASE("empty suite")
{
    SuiteConfig c;
    auto entries = run_suite(c);
    CHECK(entries.empty());
    nlohmann::json r = report_json(entries);
    CHECK(r["entries"].empty());
    CHECK(r["summary"]["fail"] == 0);
    CHECK(exit_code(entries) == 0);
}

TEST_CASE("a failing entry gives a nonzero exit code")
{
    ReportEntry ok;
    ok.verdict = Verdict::Pass;
    ReportEntry bad;
    bad.verdict = Verdict::Fail;
    CHECK(exit_code({ok}) == 0);
    CHECK(exit_code({ok, bad}) != 0);
    ReportEntry skipped;
    CHECK(exit_code({skipped}) == 0);
}

TEST_CASE("same config gives the same bytes")
{
    nlohmann::json cfg = {{"checks", {"iso", "retraction", "holim", "axioms"}},
                          {"n", {1, 2}},
                          {"seeds", {1, 2}},
                          {"trials", 5}};
    SuiteConfig c = SuiteConfig::from_json(cfg);
    const std::string a = report_json(run_suite(c)).dump();
    const std::string b = report_json(run_suite(c)).dump();
    CHECK(a == b);
    c.workers = 3;
    CHECK(report_json(run_suite(c)).dump() == a);
}

TEST_CASE("suite expansion")
{
    SuiteConfig c = SuiteConfig::from_json({{"checks", {"iso", "holim", "filtration", "axioms"}},
                                            {"n", {2, 3}},
                                            {"m", {0, 1}},
                                            {"structures", {"0-1", ""}},
                                            {"seeds", {4}}});
    auto jobs = expand_suite(c);
    std::size_t iso = 0, holim = 0, filtration = 0, axioms = 0;
    for (const auto& [name, p] : jobs) {
        iso += name == "iso";
        holim += name == "holim";
        filtration += name == "filtration";
        axioms += name == "axioms";
        CHECK(p.seeds == std::vector<std::uint64_t>{4});
    }
    CHECK(iso == 4);                // 2 values of n, 2 structures
    CHECK(holim == (3 + 4) * 2);    // every k, 2 structures
    CHECK(filtration == (3 + 4) * 2); // every k, 2 values of m
    CHECK(axioms == 1);
}

TEST_CASE("suite config validation")
{
    CHECK_THROWS_AS(SuiteConfig::from_json({{"cheks", {"iso"}}}), std::invalid_argument);
    CHECK_THROWS_AS(SuiteConfig::from_json({{"seeds", nlohmann::json::array()}}), std::invalid_argument);
    CHECK_THROWS_AS(SuiteConfig::from_json({{"n", {3, 1}}}), std::invalid_argument);
    CHECK_THROWS_AS(SuiteConfig::from_json({{"checks", {"bogus"}}}), std::invalid_argument);
    CHECK_THROWS_AS(SuiteConfig::from_json({{"format", "xml"}}), std::invalid_argument);
    SuiteConfig c = SuiteConfig::from_json({{"checks", {"iso"}}, {"caps", "degree=3,dim=5"}, {"k", "all"}});
    CHECK(c.caps.max_degree == 3);
    CHECK_FALSE(c.k.has_value());
    SuiteConfig again = SuiteConfig::from_json(c.to_json());
    CHECK(again.to_json() == c.to_json());
}

TEST_CASE("timing stays out of the report unless asked")
{
    auto entries = std::vector<ReportEntry>{run_check("iso", with_n(1))};
    CHECK_FALSE(report_json(entries)["entries"][0].contains("seconds"));
    CHECK(report_json(entries, true)["entries"][0].contains("seconds"));
    CHECK(report_text(entries).find("iso n=1: pass") != std::string::npos);
}
