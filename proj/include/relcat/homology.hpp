#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>
#include <json.hpp>

#include "relcat/relposet.hpp"
#include "relcat/simplicial.hpp"

namespace relcat {

/// Dense integer matrix with arbitrary precision entries, row major.
struct IntMatrix {
    std::size_t rows = 0, cols = 0;
    std::vector<mpz_class> data;

    IntMatrix() = default;
    IntMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0) {}
    static IntMatrix identity(std::size_t n);
    static IntMatrix from_rows(const std::vector<std::vector<long>>& rows);

    mpz_class& at(std::size_t i, std::size_t j) { return data[i * cols + j]; }
    const mpz_class& at(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
    IntMatrix operator*(const IntMatrix& o) const;
    bool operator==(const IntMatrix& o) const = default;
};

struct SmithResult {
    IntMatrix d, u, v;                 // d = u * m * v
    std::vector<mpz_class> diagonal;   // nonzero diagonal entries in order
    std::size_t rank = 0;
};

SmithResult smith_normal_form(const IntMatrix& m);

/// Column-sparse integer matrix; the entries of a simplicial boundary.
struct SparseIntMatrix {
    std::size_t rows = 0, cols = 0;
    std::vector<std::vector<std::pair<std::uint32_t, std::int64_t>>> columns;
};

struct InvariantFactors {
    std::size_t rank = 0;
    std::vector<mpz_class> nontrivial; // factors > 1, divisibility chain
};

/// Unit-pivot elimination with a dense Smith form of what remains. Runs on
/// 64-bit integers and restarts on arbitrary precision if an entry would
/// overflow.
InvariantFactors invariant_factors(const SparseIntMatrix& m);

/// boundary[d] maps dimension d to d-1; boundary[0] is the augmentation to
/// the integers, so the homology computed from it is reduced.
struct ChainComplexZ {
    std::vector<std::size_t> dims;
    std::vector<SparseIntMatrix> boundary;
};

/// Throws std::logic_error if a composite of consecutive maps is nonzero.
ChainComplexZ boundary_matrices(const SimComplex& k);

struct HomologyReport {
    struct Dim {
        int dim = 0;
        std::size_t betti = 0;
        std::vector<mpz_class> torsion;
    };
    std::vector<Dim> dims;

    bool acyclic() const;
    bool operator==(const HomologyReport& o) const;
    std::string summary() const;
    nlohmann::json to_json() const;
};

HomologyReport homology_of(const ChainComplexZ& c);

/// Reduced integral homology; throws std::invalid_argument for the empty
/// complex.
HomologyReport reduced_homology(const SimComplex& k);

/// Removes beat points (elements with a single upper or a single lower
/// cover) until none are left; the nerve keeps its homotopy type.
ElementSet beat_point_core(const Poset& p);

/// Reduced homology of the nerve, computed on the beat-point core.
HomologyReport poset_homology(const Poset& p);

/// Removing a full subcomplex K (given by its vertices) from L, compared with
/// removing its open star. The first is modelled by the subdivision of L
/// without the simplices of K, the second by the full subcomplex on the
/// other vertices.
struct OpenStarCheck {
    HomologyReport without_k;
    HomologyReport without_star;
    bool agree() const { return without_k == without_star; }
};

/// Throws std::invalid_argument if nothing is left after removing K.
OpenStarCheck open_star_check(const SimComplex& l, const std::vector<char>& k_vertices);

// ---------------------------------------------------------------- collapses

struct CollapseStep {
    Simplex face;
    Simplex coface;
};

struct CollapseCertificate {
    std::vector<CollapseStep> steps;
    Vertex final_vertex = 0;
};

struct CollapseOptions {
    int restarts = 6;        // extra randomized attempts after the greedy one
    std::uint64_t seed = 1;
};

/// Greedy free-face collapsing; cofaces of higher dimension first, then
/// lexicographic. Restarts use seeded random priorities. nullopt means no
/// collapse to a point was found, which proves nothing.
std::optional<CollapseCertificate> collapse_search(const SimComplex& k, CollapseOptions opts = {});

/// Replays the certificate on k; returns an empty string on success.
std::string replay_certificate(const SimComplex& k, const CollapseCertificate& c);

enum class VerdictKind { Collapsible, AcyclicOnly, NonAcyclic };
std::string to_string(VerdictKind v);

struct ContractibilityVerdict {
    VerdictKind kind = VerdictKind::NonAcyclic;
    std::optional<CollapseCertificate> certificate;
    HomologyReport homology;
};

/// Collapsible if the search succeeds (the certificate is replayed before
/// it is accepted), else AcyclicOnly or NonAcyclic by homology. Homology is
/// always computed.
ContractibilityVerdict contractibility_verdict(const SimComplex& k, CollapseOptions opts = {});

} // namespace relcat
