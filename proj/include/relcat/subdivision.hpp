#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "relcat/relposet.hpp"

namespace relcat {

/// Nonempty strictly ascending chain of elements of a base poset.
using ChainObject = std::vector<ElementId>;

enum class SubdivisionMode { Terminal, Initial, Double };

/// Subdivision of a relative poset. For Terminal and Initial the elements
/// are chains of base elements; for Double they are chains of elements of
/// the initial subdivision held in `inner`.
struct XiPoset {
    RelPosetPtr base;
    SubdivisionMode mode = SubdivisionMode::Terminal;
    std::vector<ChainObject> chains;
    RelPosetPtr result;
    std::shared_ptr<const XiPoset> inner;
};

/// All nonempty chains of a poset in (length, lexicographic) order.
std::vector<ChainObject> enumerate_chains(const Poset& p);

XiPoset subdivide(RelPosetPtr p, SubdivisionMode mode);

/// Last vertex (terminal), first vertex (initial), or the composite
/// first-of-last (double).
MonotoneMap vertex_map(const XiPoset& x);

// ---------------------------------------------------------------- subset chains

/// Subsets of {0..n} as bitmasks; chains ascending by inclusion.
using SubsetMask = std::uint32_t;
using SubsetChain = std::vector<SubsetMask>;

inline SubsetMask full_mask(int n) { return (SubsetMask{1} << (n + 1)) - 1; }

/// Smallest element of the bottom set.
int phi(const SubsetChain& c);

/// `{0}<{0,1}<{0,1,2}`
std::string format_chain(const SubsetChain& c);
std::string format_mask(SubsetMask m);

/// All chains of nonempty subsets of `universe`, in (length, lexicographic)
/// order.
std::vector<SubsetChain> enumerate_subset_chains(SubsetMask universe);

/// The flat chain of subsets for an element of the double subdivision of
/// the linear poset 0 < ... < n.
SubsetChain flatten_double(const XiPoset& xi, ElementId e);

enum class Region { Full, Boundary, Horn };

/// Poset of chains of nonempty subsets of {0..n} in a region, ordered by
/// chain inclusion, with marks carried over from the double subdivision of
/// the structure.
struct SubsetChainPoset {
    int n = 0;
    Region region = Region::Full;
    int k = -1;
    RelPosetPtr structure;
    std::vector<SubsetChain> chains;
    RelPosetPtr poset;
    std::map<SubsetChain, ElementId> index;

    std::optional<ElementId> find(const SubsetChain& c) const;
    std::size_t size() const { return chains.size(); }
};

bool in_region(const SubsetChain& c, int n, Region region, int k);

SubsetChainPoset sd2_region(int n, Region region, int k, RelPosetPtr structure);

/// Chain-inclusion order on a list of subset chains, without marks. Used as
/// an independent reference for orders built elsewhere.
Poset chain_inclusion_poset(const std::vector<SubsetChain>& chains);

// ---------------------------------------------------------------- cone construction

/// Two copies of D plus one extra element below the whole 1-copy. Ids:
/// (d,0) = d, (d,1) = |D| + d, apex = 2|D|.
struct KappaPoset {
    std::size_t base_size = 0;
    Poset poset;

    ElementId zero(ElementId d) const { return d; }
    ElementId one(ElementId d) const { return static_cast<ElementId>(base_size + d); }
    ElementId apex() const { return static_cast<ElementId>(2 * base_size); }
    bool is_zero(ElementId x) const { return x < base_size; }
    bool is_one(ElementId x) const { return x >= base_size && x < 2 * base_size; }
    ElementId base_of(ElementId x) const { return static_cast<ElementId>(x % base_size); }
};

KappaPoset kappa(const Poset& d);

/// Bijection between the cone over the subdivided boundary and the subdivided
/// simplex; the cone receives its marks through it.
struct KappaIdentification {
    SubsetChainPoset boundary;
    SubsetChainPoset full;
    KappaPoset cone;
    RelPosetPtr marked_cone;
    std::vector<ElementId> to_full;
    std::vector<ElementId> from_full;
};

/// Throws std::logic_error if the bijection is not an order isomorphism.
KappaIdentification identify_kappa_boundary(int n, RelPosetPtr structure);

/// The cone over the subdivided horn, marked by restriction from the
/// boundary identification, and its image in the subdivided simplex.
struct KappaHorn {
    SubsetChainPoset horn;
    KappaPoset cone;
    RelPosetPtr marked_cone;
    std::vector<ElementId> to_full;
    std::shared_ptr<const KappaIdentification> identification;
};

KappaHorn kappa_horn(int n, int k, RelPosetPtr structure);

/// Marks on the cone predicted from the vertex map alone: (d,e) -> phi(d),
/// apex -> 0, and a pair is marked iff its image pair is marked.
bool kappa_mark_description(const KappaPoset& cone, const SubsetChainPoset& base, const RelPoset& structure,
                            ElementId x, ElementId y);

// ---------------------------------------------------------------- side conditions

enum class StructureConditions {
    TopEdge,   // (n-1) -> n marked when k = n
    BothEdges, // also 0 -> 1 marked when k = 0
    Strict,    // both edges plus at least one non-identity mark
};

bool admissible(const RelPoset& structure, int n, int k, StructureConditions c);
std::string to_string(StructureConditions c);

// ---------------------------------------------------------------- retraction

struct RetractionReport {
    bool identity_ok = false;
    bool monotone_ok = false;
    bool relative_ok = false;
    std::string failure;
    std::optional<std::pair<SubsetChain, SubsetChain>> failing_pair;

    bool ok() const { return identity_ok && monotone_ok && relative_ok; }
    nlohmann::json to_json() const;
};

/// Image of the cone over the horn in the subdivided simplex.
ElementSet retraction_target(const SubsetChainPoset& full, int k);

/// The three-case formula, as ids of `full`.
std::vector<ElementId> retraction_formula(const SubsetChainPoset& full, int k);

RetractionReport validate_retraction(const SubsetChainPoset& full, const ElementSet& target,
                                     const std::vector<ElementId>& map);

struct Retraction {
    SubsetChainPoset full;
    ElementSet target;
    std::vector<ElementId> map;
    RetractionReport report;
};

/// Throws std::invalid_argument unless 0 -> 1 is marked for k = 0 and
/// (n-1) -> n is marked for k = n.
Retraction retraction_r(int n, int k, RelPosetPtr structure);

} // namespace relcat
