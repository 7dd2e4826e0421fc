#pragma once

#include <cstdint>
#include <vector>

#include "relcat/diagram.hpp"
#include "relcat/subdivision.hpp"

namespace relcat {

/// Classes of the smallest equivalence on {0..n} containing the marks and
/// closed under the two-out-of-six rule (i < j < l < m, i ~ l and j ~ m
/// force all four together). Returns a class id per vertex, ids numbered by
/// smallest member.
std::vector<int> saturated_classes(const RelPoset& structure);

/// Diagram on the linear poset of the structure with G(i -> j) a
/// quasi-isomorphism exactly when i and j are in the same saturated class.
/// Built from sphere blocks per class, random disks, harmless cross terms
/// and random unimodular basis changes; integer entries throughout.
DiagramPtr gen_sharp_linear(const RelPosetPtr& structure, std::uint64_t seed, const Caps& caps);

/// G composed with the vertex map of a subdivided horn or boundary.
DiagramPtr compose_with_phi(const Diagram& g, const SubsetChainPoset& d, bool relative_flag);

/// Adds an acyclic complex, as a direct summand, to every object over a
/// cosieve; arrows into the cosieve include the old object, arrows inside
/// it are extended by the identity.
DiagramPtr add_acyclic_summand(const Diagram& f, const ElementSet& cosieve, const ComplexPtr& acyclic);

struct RelativeDiagram {
    DiagramPtr base;   // G on {0..n}
    DiagramPtr diagram;
    std::vector<int> classes;
    ElementSet perturbed; // cosieve carrying the extra summand, possibly empty
};

/// G composed with the vertex map, optionally perturbed by an acyclic
/// summand on a random cosieve. Deterministic in the seed.
RelativeDiagram gen_relative_diagram(const SubsetChainPoset& horn, std::uint64_t seed, const Caps& caps,
                                     bool perturb = true);

/// Every arrow a quasi-isomorphism: one complex in conjugated bases plus an
/// acyclic summand on a random cosieve.
DiagramPtr gen_quasi_iso_diagram(const RelPosetPtr& index, std::uint64_t seed, const Caps& caps);

/// Small indexes with contractible nerve: point, 0 < 1, cospan, diamond,
/// subdivided 1-simplex, subdivided horn of the 2-simplex at 1.
struct NamedIndex {
    std::string name;
    RelPosetPtr index;
};
std::vector<NamedIndex> contractible_indexes();

} // namespace relcat
