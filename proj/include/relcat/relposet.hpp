#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace relcat {

using ElementId = std::uint32_t;
using ElementPair = std::pair<ElementId, ElementId>;

/// Sorted list of distinct element ids.
using ElementSet = std::vector<ElementId>;

/// Dense square bit matrix; rows are packed into 64-bit words.
class BitMatrix {
public:
    BitMatrix() = default;
    explicit BitMatrix(std::size_t n);

    std::size_t size() const { return n_; }
    bool test(std::size_t i, std::size_t j) const
    {
        return (words_[i * stride_ + j / 64] >> (j % 64)) & 1U;
    }
    void set(std::size_t i, std::size_t j)
    {
        words_[i * stride_ + j / 64] |= std::uint64_t{1} << (j % 64);
    }

    void reset(std::size_t i, std::size_t j)
    {
        words_[i * stride_ + j / 64] &= ~(std::uint64_t{1} << (j % 64));
    }

    // row(i) |= row(j)
    void or_row(std::size_t i, std::size_t j);
    // row(i) |= other.row(j); other must have the same size
    void or_row_from(std::size_t i, const BitMatrix& other, std::size_t j);

    // Warshall closure.
    void transitive_closure();

    bool operator==(const BitMatrix&) const = default;

private:
    std::size_t n_ = 0;
    std::size_t stride_ = 0;
    std::vector<std::uint64_t> words_;
};

/// Finite poset on the ids 0..size-1. All order queries go through a
/// precomputed reachability matrix.
class Poset {
public:
    Poset() = default;

    /// Builds a poset from a complete order predicate; throws
    /// std::invalid_argument unless it is reflexive, antisymmetric and
    /// transitive.
    static Poset from_relation(std::size_t size,
                               const std::function<bool(ElementId, ElementId)>& leq,
                               std::vector<std::string> labels = {});

    /// Reflexive-transitive closure of the given relations; throws if the
    /// closure has a cycle.
    static Poset from_generators(std::size_t size, std::span<const ElementPair> relations,
                                 std::vector<std::string> labels = {});

    /// Full subposet on the given sorted ids; the order is inherited, so
    /// only the covers are recomputed.
    static Poset induced(const Poset& parent, const ElementSet& sorted_ids);

    std::size_t size() const { return size_; }
    bool empty() const { return size_ == 0; }
    bool leq(ElementId a, ElementId b) const { return leq_.test(a, b); }
    bool less(ElementId a, ElementId b) const { return a != b && leq_.test(a, b); }

    std::string label(ElementId a) const;
    const std::vector<std::string>& labels() const { return labels_; }

    const std::vector<ElementId>& upper_covers(ElementId a) const { return upper_covers_[a]; }
    const std::vector<ElementId>& lower_covers(ElementId a) const { return lower_covers_[a]; }

    ElementSet strict_upper_set(ElementId a) const;
    std::vector<ElementPair> leq_pairs() const;
    std::vector<ElementPair> cover_pairs() const;

    /// Length of the longest strict chain starting at a and going up.
    std::vector<int> upper_heights() const;

    const BitMatrix& relation() const { return leq_; }

private:
    Poset(std::size_t size, BitMatrix leq, std::vector<std::string> labels);

    std::size_t size_ = 0;
    BitMatrix leq_;
    std::vector<std::string> labels_;
    std::vector<std::vector<ElementId>> upper_covers_;
    std::vector<std::vector<ElementId>> lower_covers_;
};

/// A poset whose order pairs carry a composition-closed marking (the weak
/// equivalences). Marks are given as generators and closed on construction.
class RelPoset {
public:
    RelPoset() = default;
    RelPoset(Poset base, std::span<const ElementPair> generator_marks);

    static RelPoset minimal(Poset base);
    static RelPoset maximal(Poset base);
    static RelPoset from_mark_predicate(Poset base,
                                        const std::function<bool(ElementId, ElementId)>& marked);
    /// Restriction to a full subposet (sorted ids); marks stay closed.
    static RelPoset induced(const RelPoset& parent, const ElementSet& sorted_ids);

    const Poset& poset() const { return base_; }
    std::size_t size() const { return base_.size(); }
    bool leq(ElementId a, ElementId b) const { return base_.leq(a, b); }
    bool less(ElementId a, ElementId b) const { return base_.less(a, b); }
    bool marked(ElementId a, ElementId b) const { return marks_.test(a, b); }
    std::string label(ElementId a) const { return base_.label(a); }

    std::vector<ElementPair> marked_pairs(bool include_identities = true) const;

    /// Marked pairs that are not a composite of two non-identity marked
    /// pairs; every mark is a composite of these.
    std::vector<ElementPair> irreducible_marks() const;

    /// Recomputes the composition closure and compares.
    bool closure_is_idempotent() const;

    const BitMatrix& marks() const { return marks_; }

private:
    RelPoset(Poset base, BitMatrix marks);
    RelPoset(Poset base, BitMatrix marks, bool already_closed);
    void close_and_validate();

    Poset base_;
    BitMatrix marks_;
};

using RelPosetPtr = std::shared_ptr<const RelPoset>;

/// Order-preserving map between relative posets. Preservation of marks is
/// a separate predicate (is_relative_map).
class MonotoneMap {
public:
    MonotoneMap(RelPosetPtr source, RelPosetPtr target, std::vector<ElementId> assignment);

    static MonotoneMap identity(RelPosetPtr p);

    ElementId operator()(ElementId a) const { return assignment_[a]; }
    const RelPosetPtr& source() const { return source_; }
    const RelPosetPtr& target() const { return target_; }
    const std::vector<ElementId>& assignment() const { return assignment_; }

private:
    RelPosetPtr source_;
    RelPosetPtr target_;
    std::vector<ElementId> assignment_;
};

/// Full subposet together with its embedding into the parent.
struct Subposet {
    RelPosetPtr poset;
    std::vector<ElementId> to_parent;

    std::optional<ElementId> local(ElementId parent_id) const;
};

Subposet full_subposet(const RelPoset& parent, const ElementSet& elements);

/// Linear poset 0 < 1 < ... < n with the composition closure of the
/// generator marks. Throws std::invalid_argument on out-of-range pairs.
RelPoset build_simplex(int n, std::span<const ElementPair> generator_marks = {});

/// Parses `we = 0-1, 2-3` (the `we =` prefix is optional).
std::vector<ElementPair> parse_structure(const std::string& text);

/// Non-identity marked pairs of a structure on n, as `0-1,0-2`.
std::string format_structure(const RelPoset& p);

/// Every composition-closed marking of the linear poset n, deduplicated, in
/// a deterministic order.
std::vector<RelPoset> all_relative_structures(int n);

bool is_relative_map(const MonotoneMap& f);

/// Product order; (p,q) -> (p',q') is marked iff both components are.
RelPoset product(const RelPoset& p, const RelPoset& q);

/// Elements receiving a relation from some element of c.
ElementSet vplus(const RelPoset& d, const ElementSet& c);

bool is_cosieve(const RelPoset& d, const ElementSet& a);

/// The comma poset i/d = {a : i(a) <= d} as a full subposet of the source.
Subposet comma_fiber(const MonotoneMap& i, ElementId d);

/// The dual comma poset d/i = {a : d <= i(a)}.
Subposet under_fiber(const MonotoneMap& i, ElementId d);

/// True iff lambda(p) <= q exactly when p <= rho(q), for all p, q.
bool check_galois_connection(const MonotoneMap& lambda, const MonotoneMap& rho);

/// Whether a subset has a greatest element.
std::optional<ElementId> maximum(const RelPoset& p, const ElementSet& elements);

/// f is a bijection with a <= b iff f(a) <= f(b); with check_marks also
/// compares the markings.
bool is_order_isomorphism(const RelPoset& a, const RelPoset& b, const std::vector<ElementId>& f,
                          bool check_marks = false);

/// {elements, leq_pairs, marked_pairs}
nlohmann::json to_json(const RelPoset& p);

ElementSet all_elements(const RelPoset& p);

} // namespace relcat
