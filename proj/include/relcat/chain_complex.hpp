#pragma once

#include <map>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "relcat/linalg.hpp"

namespace relcat {

/// Bounded chain complex of finite dimensional rational vector spaces.
/// d(k) maps degree k to degree k-1 and is a dim(k-1) x dim(k) matrix
/// acting on column vectors.
class ChainComplexQ {
public:
    /// The zero complex.
    ChainComplexQ() = default;

    /// dims[i] is the dimension in degree lo + i; diffs[i] is d(lo + i + 1).
    /// Throws std::invalid_argument on shape errors and std::logic_error if
    /// some d(k) d(k+1) is nonzero.
    ChainComplexQ(int lo, std::vector<std::size_t> dims, std::vector<QMatrix> diffs);

    int lo() const { return lo_; }
    int hi() const { return lo_ + static_cast<int>(dims_.size()) - 1; }
    bool is_zero() const { return total_dim() == 0; }
    std::size_t dim(int k) const;
    std::size_t total_dim() const;
    /// Zero matrix of the right shape outside the stored range.
    QMatrix d(int k) const;

    /// Exact Betti numbers over the rationals, in degrees lo..hi.
    std::vector<std::size_t> betti() const;
    std::size_t betti(int k) const;
    /// Certified by ranks modulo a large prime when they add up, else
    /// decided by exact ranks.
    bool acyclic() const;

    /// Drops zero dimensional degrees at both ends.
    ChainComplexQ trimmed() const;
    bool operator==(const ChainComplexQ& o) const;

    nlohmann::json to_json() const;
    static ChainComplexQ from_json(const nlohmann::json& j);

private:
    int lo_ = 0;
    std::vector<std::size_t> dims_;
    std::vector<QMatrix> diffs_;
};

using ComplexPtr = std::shared_ptr<const ChainComplexQ>;

ComplexPtr make_complex(ChainComplexQ c);

/// Homology dims printed as `b0=1 b2=3`, zero degrees omitted, or `acyclic`.
std::string betti_summary(const ChainComplexQ& c);

/// Same Betti numbers in every degree.
bool same_homology(const ChainComplexQ& a, const ChainComplexQ& b);

class ChainMap {
public:
    /// components[k] maps degree k of the source to degree k of the target;
    /// missing degrees are zero. Throws std::invalid_argument on shape
    /// errors and std::logic_error if the map does not commute with d.
    ChainMap(ComplexPtr source, ComplexPtr target, std::map<int, QMatrix> components);

    static ChainMap identity(ComplexPtr c);
    static ChainMap zero(ComplexPtr source, ComplexPtr target);

    const ChainComplexQ& source() const { return *source_; }
    const ChainComplexQ& target() const { return *target_; }
    const ComplexPtr& source_ptr() const { return source_; }
    const ComplexPtr& target_ptr() const { return target_; }
    QMatrix at(int k) const;

    /// (*this) after `first`.
    ChainMap after(const ChainMap& first) const;
    ChainMap operator+(const ChainMap& o) const;
    ChainMap operator-(const ChainMap& o) const;
    bool operator==(const ChainMap& o) const;

    bool degreewise_surjective() const;
    bool degreewise_injective() const;

    nlohmann::json to_json() const;

private:
    struct Trusted {};
    // composites and sums of chain maps; only shapes and zeros are handled
    ChainMap(ComplexPtr source, ComplexPtr target, std::map<int, QMatrix> components, Trusted);
    void drop_zero_components();

    ComplexPtr source_, target_;
    std::map<int, QMatrix> comp_;
};

/// Mapping cone: degree k is source_{k-1} + target_k with
/// d(a, b) = (-d a, f a + d b).
ChainComplexQ cone(const ChainMap& f);

struct QuasiIsoReport {
    bool ok = false;
    // first degree with nonzero cone homology and the ranks involved
    std::optional<int> degree;
    std::size_t cone_dim = 0, rank_in = 0, rank_out = 0;
    std::string describe() const;
};

QuasiIsoReport quasi_iso_report(const ChainMap& f);
bool is_quasi_iso(const ChainMap& f);

/// f = p s with B_k = A_k + C_k + C_{k+1},
/// d(a, c, h) = (d a, d c, f a - c - d h), s(a) = (a, f a, 0), p(a, c, h) = c.
/// r(a, c, h) = a is a chain map with r s = id.
struct Factorization {
    ComplexPtr middle;
    std::shared_ptr<ChainMap> s, p, r;
};

Factorization factorize(const ChainMap& f);

/// Path object C^I with C^I_k = C_k + C_k + C_{k+1}, constant map and the
/// two endpoint evaluations.
struct PathObject {
    ComplexPtr path;
    std::shared_ptr<ChainMap> constant, ev0, ev1;
};

PathObject path_object(const ComplexPtr& c);

struct DirectSum {
    ComplexPtr sum;
    std::vector<ChainMap> projections, inclusions;
};

DirectSum direct_sum(const std::vector<ComplexPtr>& parts);

/// Kernel of a chain map as a subcomplex, with coordinates taken at the
/// free columns of a reduced echelon form.
struct KernelComplex {
    ComplexPtr kernel;
    std::shared_ptr<ChainMap> inclusion;
    std::map<int, Kernel> data;

    /// The unique lift of g: X -> source(phi) with phi g = 0.
    ChainMap lift(const ChainMap& g) const;
};

KernelComplex kernel_complex(const ChainMap& phi);

/// Degreewise fiber product of f: A -> C and p: B -> C.
struct Pullback {
    ComplexPtr object;
    std::shared_ptr<ChainMap> to_a, to_b;
};

/// Throws std::invalid_argument unless p is degreewise surjective.
Pullback pullback(const ChainMap& f, const ChainMap& p);

/// A x_C C^I x_C B written out: H_k = A_k + B_k + C_{k+1},
/// d(x, y, h) = (d x, d y, a x - b y - d h).
struct HomotopyPullback {
    ComplexPtr object;
    std::shared_ptr<ChainMap> to_a, to_b;
};

HomotopyPullback homotopy_pullback(const ChainMap& a, const ChainMap& b);

/// The same object assembled from two strict pullbacks along the path
/// object endpoints.
Pullback homotopy_pullback_by_pullbacks(const ChainMap& a, const ChainMap& b);

// ---------------------------------------------------------------- random data

struct Caps {
    int min_degree = 0;
    int max_degree = 4;
    std::size_t max_dim = 6;

    nlohmann::json to_json() const;
    /// `degree=4,dim=6` style.
    static Caps parse(const std::string& text);
};

using Rng = std::mt19937_64;

long random_int(Rng& rng, long lo, long hi);

/// Random unimodular integer matrix.
QMatrix random_unimodular(Rng& rng, std::size_t n);

/// Sphere and disk summands: betti[k] copies of Q in degree k plus `disks`
/// acyclic pairs, before any basis change.
ChainComplexQ standard_complex(int lo, const std::vector<std::size_t>& betti,
                               const std::vector<std::pair<int, std::size_t>>& disks);

/// Conjugates every degree by a random unimodular matrix.
struct BasisChange {
    ComplexPtr complex;
    std::shared_ptr<ChainMap> forward;  // old -> new
    std::shared_ptr<ChainMap> backward; // new -> old
};

BasisChange random_basis_change(Rng& rng, const ComplexPtr& c);

/// Random complex within the caps with integer differentials.
ComplexPtr random_complex(Rng& rng, const Caps& caps);

/// Random acyclic complex within the caps.
ComplexPtr random_acyclic(Rng& rng, const Caps& caps);

/// Random integer combination of a basis of all chain maps a -> b.
ChainMap random_chain_map(Rng& rng, const ComplexPtr& a, const ComplexPtr& b);

} // namespace relcat
