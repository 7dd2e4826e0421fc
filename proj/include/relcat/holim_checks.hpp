#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "relcat/diagram.hpp"
#include "relcat/generator.hpp"
#include "relcat/subdivision.hpp"

namespace relcat {

struct StepResult {
    std::string name;
    bool ok = false;
    bool skipped = false;
    std::string detail;

    nlohmann::json to_json() const;
};

bool all_ok(const std::vector<StepResult>& steps);

// ---------------------------------------------------------------- holim over the horn

struct HolimPropOptions {
    bool intermediate = true; // holim over pi^-1(i) steps
};

struct HolimPropReport {
    int n = 0, k = 0;
    std::string structure;
    bool ok = false;
    std::size_t holim_dim = 0;
    std::string holim_homology, target_homology;
    QuasiIsoReport main;
    std::vector<StepResult> steps;

    nlohmann::json to_json() const;
};

/// holim over the subdivided horn -> F({0}) must be a quasi-isomorphism.
/// Throws std::invalid_argument unless the horn has n >= 2, the structure
/// marks (n-1) -> n when k = n, and F is a relative diagram on the horn.
HolimPropReport check_holim_prop(const SubsetChainPoset& horn, const DiagramPtr& f, HolimPropOptions opts = {});

// ---------------------------------------------------------------- pie decomposition

/// For j < i: D = pi^-1({0..i}), A = pi^-1({j+1..i}) and
/// B = D ∩ V+ pi^-1({0..j}). Checks that A and B are cosieves covering D,
/// that holim_B -> holim over pi^-1({0..j}) is a quasi-isomorphism, and that
/// holim_D maps quasi-isomorphically to the homotopy pullback of
/// holim_A -> holim_{A∩B} <- holim_B, compatibly with the restrictions.
struct DecompositionReport {
    int n = 0, k = 0, i = 0, j = 0;
    std::string structure;
    std::size_t size_d = 0, size_a = 0, size_b = 0, size_ab = 0;
    std::string holim_homology, pullback_homology;
    bool ok = false;
    std::vector<StepResult> steps;

    nlohmann::json to_json() const;
};

/// cross_validate also assembles the pullback from strict pullbacks and as
/// holim over the cospan index, and compares homology.
DecompositionReport check_decomposition(const SubsetChainPoset& horn, const DiagramPtr& f, int i, int j,
                                        bool cross_validate);

// ---------------------------------------------------------------- contractible index

struct ContractibleHolimReport {
    std::string index;
    std::uint64_t seed = 0;
    std::size_t size = 0;
    std::string nerve_homology;
    bool ok = false;
    std::vector<StepResult> steps;

    nlohmann::json to_json() const;
};

/// All arrows quasi-isomorphisms over an index with contractible nerve:
/// every canonical map holim -> F'(d) and every eta must be one.
ContractibleHolimReport check_contractible_holim(const NamedIndex& index, std::uint64_t seed, const Caps& caps);

// ---------------------------------------------------------------- extension

struct ExtensionOptions {
    bool full_functoriality = false;
    // kernel limit comparison only below this total dimension
    std::size_t limit_budget = 400;
};

struct PairTally {
    std::size_t pairs = 0, quasi_isos = 0, marked = 0;
    nlohmann::json to_json() const;
};

struct ExtensionReport {
    int n = 0, k = 0;
    std::string structure;
    bool saturated = false;
    std::size_t cone_size = 0, limit_dim = 0;
    PairTally covers_zero, covers_one, units, apex;
    std::size_t direct_apex_checks = 0;
    bool ok = false;
    std::vector<StepResult> steps;

    nlohmann::json to_json() const;
};

/// Extends F over the cone of the horn and compares the arrows with the
/// marking of the cone. An arrow x -> y is expected to be a
/// quasi-isomorphism exactly when the vertex classes of x and y agree, the
/// vertex of (d, e) being phi(d) and that of the apex 0. Marked arrows must
/// be quasi-isomorphisms; when the structure is saturated (its marks are
/// exactly the pairs in one class) the two must agree.
ExtensionReport check_extension(const KappaHorn& kh, const DiagramPtr& f, const std::vector<int>& vertex_classes,
                                ExtensionOptions opts = {});

/// Random relative diagram on the horn (G composed with phi), then
/// check_extension with its saturated classes.
ExtensionReport check_extension(const KappaHorn& kh, std::uint64_t seed, const Caps& caps,
                                ExtensionOptions opts = {});

struct ThomasonReport {
    int n = 0;
    std::string structure;
    std::string nerve_verdict;
    ExtensionReport extension;
    bool ok = false;
    std::vector<StepResult> steps;

    nlohmann::json to_json() const;
};

/// Lifting instance for the horn at n: a diagram of quasi-isomorphisms on
/// the subdivided horn extends over the cone with every arrow a
/// quasi-isomorphism, the nerve of the horn being contractible.
ThomasonReport check_thomason(int n, const RelPosetPtr& structure, std::uint64_t seed, const Caps& caps,
                              ExtensionOptions opts = {});

// ---------------------------------------------------------------- axioms

struct AxiomsReport {
    std::uint64_t seed = 0;
    std::size_t trials = 0;
    std::size_t six_hypothesis_hits = 0;
    bool ok = false;
    std::vector<StepResult> steps;

    nlohmann::json to_json() const;
};

/// Terminal object, isomorphisms, 2-out-of-6 on random composable triples,
/// base change along (trivial) fibrations and factorization.
AxiomsReport check_axioms(std::uint64_t seed, std::size_t trials, const Caps& caps);

} // namespace relcat
