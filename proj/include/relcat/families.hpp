#pragma once

#include <optional>
#include <string>
#include <vector>

#include "relcat/relposet.hpp"
#include "relcat/subdivision.hpp"

namespace relcat {

// All element sets below are ids of a subdivided horn (or boundary) poset.

/// Chains whose vertex phi lies in the subset `e` of {0..n}.
ElementSet pi_preimage(const SubsetChainPoset& d, SubsetMask e);

/// Chains with vertex i whose top set contains some j < i.
ElementSet x_family(const SubsetChainPoset& d, int i);

/// Members of x_family with bottom set exactly {i}.
ElementSet xbar_family(const SubsetChainPoset& d, int i);

/// Bottom set inside {n-1, n} and top set containing some j < n-1.
ElementSet y_family(const SubsetChainPoset& d);

/// {0, ..., i} as a mask; empty for i < 0.
SubsetMask initial_segment(int i);

enum class FamilyKind { PiPreimage, X, Xbar, Y };

struct FamilySelector {
    FamilyKind kind = FamilyKind::PiPreimage;
    SubsetMask e = 0; // PiPreimage
    int i = -1;       // X, Xbar

    std::string describe() const;
};

/// Whether the family is one of those asserted to have a contractible
/// nerve for the given (n, k).
bool claimed_contractible(int n, int k, const FamilySelector& sel);

/// Every selector that is claimed contractible for (n, k), in a fixed order.
std::vector<FamilySelector> contractible_selectors(int n, int k);

struct Family {
    FamilySelector selector;
    Subposet sub;
    // For Xbar: the surrounding X family, the left adjoint X -> Xbar and the
    // inclusion Xbar -> X.
    std::optional<Subposet> ambient;
    std::optional<MonotoneMap> lambda;
    std::optional<MonotoneMap> inclusion;
};

/// Throws std::invalid_argument for out-of-range selectors.
Family preimage_family(const SubsetChainPoset& horn, const FamilySelector& sel);
Family preimage_family(int n, int k, RelPosetPtr structure, const FamilySelector& sel);

struct IsoCheck {
    bool ok = false;
    std::size_t size = 0;
    std::string detail;
};

/// Deleting i (and shifting larger labels down) identifies Xbar with a
/// boundary or horn of dimension n-1 minus the chains inside the face
/// spanned by {i, ..., n-1}.
IsoCheck check_xbar_isomorphism(const SubsetChainPoset& horn, int i);

/// The poset Xbar is isomorphic to after deleting i, before the face is
/// removed, with the chains lying inside the face spanned by {i, ..., n-1}.
struct XbarAmbient {
    SubsetChainPoset ambient;
    ElementSet face;
};
XbarAmbient xbar_ambient(const SubsetChainPoset& horn, int i);

/// Decomposition of the Y family (k = n >= 2) into Y0 (bottom {n}), Y1
/// (bottom {n-1}) and Y2 (bottom or next set {n-1,n}).
struct YDecomposition {
    ElementSet y, y0, y1, y2;
    IsoCheck y0_iso;  // boundary of dimension n-1 minus the vertex {n-1}
    IsoCheck y1_iso;  // horn at n-1 of dimension n-1 minus the vertex {n-1}
    IsoCheck y2_iso;  // boundary of dimension n-2 times a three element poset
    IsoCheck y02_iso; // boundary of dimension n-2
    IsoCheck y12_iso; // boundary of dimension n-2
    bool chains_covered = false; // every chain of Y lies in Y0, Y1 or Y2

    bool ok() const
    {
        return y0_iso.ok && y1_iso.ok && y2_iso.ok && y02_iso.ok && y12_iso.ok && chains_covered;
    }
};

YDecomposition decompose_y(const SubsetChainPoset& horn);

/// A pair of monotone maps claimed to form a Galois connection
/// lambda -| rho.
struct GaloisInstance {
    std::string name;
    MonotoneMap lambda;
    MonotoneMap rho;
};

/// Reduction of the preimage of e to the subdivided simplex on e: C is the
/// part with bottom set inside e, D' the part with top set inside e.
struct PreimageReduction {
    Subposet preimage;
    Subposet c;
    Subposet d_prime;
    // one instance per element W: chains on (bottom of W) ∩ e  vs  W/C
    std::vector<GaloisInstance> fibers;
    std::optional<GaloisInstance> d_prime_in_c;
    IsoCheck d_prime_iso; // D' against the subdivided simplex on e
};

PreimageReduction preimage_reduction(const SubsetChainPoset& horn, SubsetMask e);

} // namespace relcat
