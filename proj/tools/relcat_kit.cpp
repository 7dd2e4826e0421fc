#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "relcat/verifier.hpp"

using namespace relcat;

namespace {

// `1,2,5` or `1-20` or a mix of both
std::vector<std::uint64_t> parse_seeds(const std::string& text)
{
    std::vector<std::uint64_t> out;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ',')) {
        if (part.empty())
            continue;
        const auto dash = part.find('-');
        if (dash == std::string::npos) {
            out.push_back(std::stoull(part));
            continue;
        }
        const auto lo = std::stoull(part.substr(0, dash)), hi = std::stoull(part.substr(dash + 1));
        if (lo > hi)
            throw std::invalid_argument("empty seed range " + part);
        for (auto s = lo; s <= hi; ++s)
            out.push_back(s);
    }
    if (out.empty())
        throw std::invalid_argument("no seeds given");
    return out;
}

int emit(const std::vector<ReportEntry>& entries, const std::string& format, const std::string& path, bool timing)
{
    const std::string body = format == "text" ? report_text(entries, timing) : report_json(entries, timing).dump(2) + "\n";
    if (path.empty()) {
        std::cout << body;
    } else {
        std::ofstream out(path);
        if (!out || !(out << body)) {
            std::cerr << "cannot write " << path << "\n";
            return 2;
        }
    }
    return exit_code(entries);
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Checks for relative posets, their subdivisions and homotopy limits of chain complexes"};
    app.require_subcommand(1);

    auto* verify = app.add_subcommand("verify", "run one check");
    std::string check;
    int n = 0, m = 0, k = 0, i = 0, j = 0;
    std::string we, seeds = "1", caps, family = "all", range, side = "both", format = "json", out;
    std::uint64_t seed = 1;
    std::size_t trials = 40;
    bool timing = false;
    std::vector<std::string> names;
    for (const auto& c : check_table())
        names.push_back(c.name);
    verify->add_option("check", check, "check name")->required()->check(CLI::IsMember(names));
    auto* n_opt = verify->add_option("--n", n, "simplex dimension");
    auto* m_opt = verify->add_option("--m", m, "second factor dimension (filtration)");
    auto* k_opt = verify->add_option("--k", k, "horn index; all when absent");
    auto* we_opt = verify->add_option("--we", we, "marked pairs such as 0-1,2-3; all structures when absent");
    auto* seed_opt = verify->add_option("--seed", seed, "single seed");
    auto* seeds_opt = verify->add_option("--seeds", seeds, "seed list such as 1-20 or 1,4,9")->excludes(seed_opt);
    verify->add_option("--caps", caps, "complex caps such as degree=4,dim=6");
    verify->add_option("--family", family, "contractible: all, pi-preimage, X, Xbar, Y, galois");
    auto* range_opt = verify->add_option("--range", range, "pi-preimage selector lo..hi");
    verify->add_option("--side", side, "filtration: left, right, both")->check(CLI::IsMember({"left", "right", "both"}));
    auto* i_opt = verify->add_option("--i", i, "decomposition i, or X/Xbar index");
    auto* j_opt = verify->add_option("--j", j, "decomposition j");
    verify->add_option("--trials", trials, "axioms: random trials per seed");
    verify->add_option("--format", format, "json or text")->check(CLI::IsMember({"json", "text"}));
    verify->add_option("--out", out, "write the report here instead of stdout");
    verify->add_flag("--timing", timing, "include seconds per entry");

    auto* suite = app.add_subcommand("suite", "run a suite from a JSON config");
    std::string config_path;
    unsigned workers = 0;
    suite->add_option("--config", config_path, "config file")->required();
    suite->add_option("--workers", workers, "override the worker count");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*verify) {
            CheckParams p;
            if (*n_opt)
                p.n = n;
            if (*m_opt)
                p.m = m;
            if (*k_opt)
                p.k = k;
            if (*we_opt)
                p.we = we;
            if (*i_opt)
                p.i = i;
            if (*j_opt)
                p.j = j;
            if (*range_opt)
                p.range = range;
            if (*seeds_opt)
                p.seeds = parse_seeds(seeds);
            else
                p.seeds = {seed};
            if (!caps.empty())
                p.caps = Caps::parse(caps);
            p.family = family;
            p.side = side;
            p.trials = trials;
            return emit({run_check(check, p)}, format, out, timing);
        }
        std::ifstream in(config_path);
        if (!in) {
            std::cerr << "cannot read " << config_path << "\n";
            return 2;
        }
        nlohmann::json j_config;
        try {
            in >> j_config;
        } catch (const nlohmann::json::exception& e) {
            std::cerr << config_path << ": " << e.what() << "\n";
            return 2;
        }
        SuiteConfig config = SuiteConfig::from_json(j_config);
        if (workers > 0)
            config.workers = workers;
        return emit(run_suite(config), config.format, config.output, config.timing);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::out_of_range& e) {
        std::cerr << "error: number out of range\n";
        return 2;
    }
}
