#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "relcat/chain_complex.hpp"
#include "relcat/relposet.hpp"
#include "relcat/subdivision.hpp"

namespace relcat {

/// Functor from a finite relative poset to chain complexes, given by its
/// values on covering relations.
class Diagram {
public:
    /// Throws std::invalid_argument unless there is exactly one arrow per
    /// cover pair with matching source and target complexes.
    Diagram(RelPosetPtr index, std::vector<ComplexPtr> objects, std::map<ElementPair, ChainMap> arrows,
            bool relative_flag = false);

    const RelPoset& index() const { return *index_; }
    const RelPosetPtr& index_ptr() const { return index_; }
    std::size_t size() const { return objects_.size(); }
    const ComplexPtr& object(ElementId x) const { return objects_.at(x); }
    const std::map<ElementPair, ChainMap>& cover_arrows() const { return arrows_; }
    bool relative_flag() const { return relative_; }

    /// F(x -> y) for x <= y, composed along a path of covers.
    ChainMap arrow(ElementId x, ElementId y) const;

    /// Empty when composites along all paths agree exactly.
    std::string functoriality_error() const;

    /// Empty when every irreducible marked pair (or every marked pair with
    /// all_pairs) goes to a quasi-isomorphism.
    std::string relativity_error(bool all_pairs = false) const;

    /// Throws std::logic_error on either failure; relativity only if flagged.
    void validate() const;

    /// Full subdiagram on sorted ids, with the induced marking.
    Diagram restricted(const ElementSet& elements) const;

    nlohmann::json to_json() const;
    static Diagram from_json(const nlohmann::json& j);

private:
    RelPosetPtr index_;
    std::vector<ComplexPtr> objects_;
    std::map<ElementPair, ChainMap> arrows_;
    bool relative_ = false;
    mutable std::mutex cache_mutex_;
    mutable std::map<ElementPair, std::shared_ptr<const ChainMap>> cache_;
};

using DiagramPtr = std::shared_ptr<const Diagram>;

/// Degree function for an inverse index: strict relations go to strictly
/// smaller degrees, so everything above an element is handled first.
struct InverseStructure {
    std::vector<int> degree;

    /// Longest strict chain going up from each element.
    static InverseStructure colength(const Poset& p);
    /// Empty if x < y always gives degree(y) < degree(x).
    std::string validation_error(const Poset& p) const;
    /// Ascending degree, ties by id.
    std::vector<ElementId> processing_order() const;
};

/// Limit as the kernel of prod F(d) -> prod over covers x < y of F(y),
/// (v_d) -> F(x -> y) v_x - v_y.
struct Limit {
    ComplexPtr object;
    std::vector<ChainMap> projections; // one per element of the index
    std::shared_ptr<KernelComplex> kernel;
    std::shared_ptr<DirectSum> product;

    /// The map into the limit induced by a cone, one map per element.
    ChainMap lift(const std::vector<ChainMap>& cone) const;
};

Limit limit(const Diagram& f);

/// Empty if F(x -> y) after the projection to x equals the projection to y
/// for every cover.
std::string cone_error(const Diagram& f, const std::vector<ChainMap>& cone);

/// Explicit model of the limit of the Reedy fibrant replacement over a full
/// subposet B: one summand F(w_j) shifted down by j for every chain
/// w_0 < ... < w_j in B. For B = {v >= u} this is the replacement at u; the
/// part over chains starting above u is the matching object and the rest
/// is the factorization summand. Restriction to a smaller full subposet is
/// the projection onto its chains.
class ChainModel {
public:
    ChainModel(DiagramPtr f, ElementSet elements);

    const ComplexPtr& complex() const { return complex_; }
    const ElementSet& elements() const { return elements_; }
    const std::vector<std::vector<ElementId>>& chains() const { return chains_; }
    const DiagramPtr& diagram() const { return f_; }

    /// x -> x[(d)], a map to F(d); d must be in the subposet.
    ChainMap evaluation(ElementId d) const;
    /// Projection onto the chains of a smaller model of the same diagram.
    ChainMap restriction(const ChainModel& smaller) const;
    /// For a subposet with minimum u: a -> (F(u -> v) a) on the chains (v).
    ChainMap coaugmentation(ElementId u) const;

    /// Offset of the summand of a chain in degree k, if it is nonzero there.
    std::optional<std::size_t> offset(std::size_t chain, int k) const;

private:
    DiagramPtr f_;
    ElementSet elements_;
    std::vector<std::vector<ElementId>> chains_;
    std::map<std::vector<ElementId>, std::size_t> chain_index_;
    int lo_ = 0, hi_ = -1;
    std::map<int, std::vector<std::size_t>> offsets_; // per degree, prefix sums over chains
    ComplexPtr complex_;

    std::size_t block_dim(std::size_t chain, int k) const;
};

/// Reedy fibrant replacement F -> F'.
struct ReedyReplacement {
    DiagramPtr source;
    InverseStructure inverse;
    std::vector<std::shared_ptr<const ChainModel>> fibrant;  // F'(u), over {v >= u}
    std::vector<std::shared_ptr<const ChainModel>> matching; // M_u, over {v > u}
    DiagramPtr replaced;
    std::vector<ChainMap> eta;           // F(u) -> F'(u)
    std::vector<ChainMap> matching_maps; // F'(u) -> M_u
    std::vector<ChainMap> retractions;   // F'(u) -> F(u), left inverse of eta
};

/// Builds F'(u) by processing elements in the order of the inverse
/// structure. With check_factorization, also compares every F'(u) with
/// factorize(F(u) -> M_u) up to a permutation of coordinates and throws
/// std::logic_error on mismatch.
ReedyReplacement reedy_replace(const DiagramPtr& f, const InverseStructure& inv, bool check_factorization = false);

/// Per element: eta a quasi-isomorphism, matching map degreewise
/// surjective. Empty when all hold.
std::string reedy_error(const ReedyReplacement& r);

/// Homotopy limit with canonical maps to F'(d).
struct Holim {
    std::shared_ptr<const ChainModel> model;
    ReedyReplacement replacement;

    const ComplexPtr& object() const { return model->complex(); }
    ChainMap canonical(ElementId d) const;
};

Holim holim(const DiagramPtr& f, const InverseStructure& inv);

/// Extension over the cone K(D): (d,0) -> F(d), (d,1) -> F'(d), apex -> lim F'.
struct Extension {
    KappaPoset cone;
    DiagramPtr g;
    ReedyReplacement replacement;
    std::shared_ptr<const ChainModel> limit;
};

/// `marked_cone` (optional) supplies the marking of the index of G.
Extension extend_to_kappa(const DiagramPtr& f, const InverseStructure& inv, RelPosetPtr marked_cone = nullptr);

} // namespace relcat
