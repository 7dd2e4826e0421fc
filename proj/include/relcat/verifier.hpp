#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "relcat/chain_complex.hpp"

namespace relcat {

enum class Verdict { Pass, Fail, Downgraded, Skipped };

/// pass, fail, downgraded, skipped
std::string to_string(Verdict v);

struct CheckParams {
    std::optional<int> n, m, k;
    // one structure such as `0-1,2-3`; all of them (subject to the check's
    // side conditions) when absent
    std::optional<std::string> we;
    std::vector<std::uint64_t> seeds{1};
    Caps caps;
    std::string family = "all"; // contractible: all, pi-preimage, X, Xbar, Y, galois
    std::optional<std::string> range; // pi-preimage selector such as `0..1`
    std::string side = "both";  // filtration: left, right, both
    std::optional<int> i, j;    // decomposition pair; i also picks X/Xbar
    std::size_t trials = 40;    // axioms

    nlohmann::json to_json() const;
};

struct ReportEntry {
    std::string check;
    CheckParams params;
    Verdict verdict = Verdict::Skipped;
    nlohmann::json evidence;
    double seconds = 0;

    /// Timing is left out unless asked for, so equal inputs give equal bytes.
    nlohmann::json to_json(bool with_timing = false) const;
};

struct CheckInfo {
    std::string name;
    std::string summary;
    std::vector<std::string> statements; // results exercised by the check
    bool uses_n = false, uses_m = false, uses_k = false, uses_structure = false, uses_seeds = false;
};

/// The dispatch table, in report order.
const std::vector<CheckInfo>& check_table();

/// Statements that some check must exercise.
const std::vector<std::string>& required_statements();

/// Throws std::invalid_argument for an unknown name. Out-of-range
/// parameters and unmet side conditions give a skipped entry; exceptions
/// raised while checking give a failed entry carrying the message.
ReportEntry run_check(const std::string& name, const CheckParams& params);

struct SuiteConfig {
    std::vector<std::string> checks;
    std::pair<int, int> n{1, 3};
    std::pair<int, int> m{0, 2};
    std::optional<std::pair<int, int>> k; // every valid k when absent
    std::optional<std::vector<std::string>> structures; // all when absent
    std::vector<std::uint64_t> seeds{1};
    Caps caps;
    std::string family = "all";
    std::string side = "both";
    std::size_t trials = 40;
    unsigned workers = 1;
    std::string format = "json";
    std::string output;
    bool timing = false;

    /// Throws std::invalid_argument on unknown keys, empty ranges or an
    /// empty seed list.
    static SuiteConfig from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;
};

/// One job per check and parameter point, in a fixed order.
std::vector<std::pair<std::string, CheckParams>> expand_suite(const SuiteConfig& config);

/// Runs jobs on a bounded pool; entries come back in job order.
std::vector<ReportEntry> run_jobs(const std::vector<std::pair<std::string, CheckParams>>& jobs, unsigned workers);

std::vector<ReportEntry> run_suite(const SuiteConfig& config);

nlohmann::json report_json(const std::vector<ReportEntry>& entries, bool with_timing = false);
std::string report_text(const std::vector<ReportEntry>& entries, bool with_timing = false);

/// 0 when no entry failed, else 1.
int exit_code(const std::vector<ReportEntry>& entries);

} // namespace relcat
