#include "relcat/relposet.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>

namespace relcat {

BitMatrix::BitMatrix(std::size_t n) : n_(n), stride_((n + 63) / 64), words_(n * ((n + 63) / 64), 0) {}

void BitMatrix::or_row(std::size_t i, std::size_t j)
{
    std::uint64_t* dst = &words_[i * stride_];
    const std::uint64_t* src = &words_[j * stride_];
    for (std::size_t w = 0; w < stride_; ++w)
        dst[w] |= src[w];
}

void BitMatrix::or_row_from(std::size_t i, const BitMatrix& other, std::size_t j)
{
    std::uint64_t* dst = &words_[i * stride_];
    const std::uint64_t* src = &other.words_[j * stride_];
    for (std::size_t w = 0; w < stride_; ++w)
        dst[w] |= src[w];
}

void BitMatrix::transitive_closure()
{
    for (std::size_t k = 0; k < n_; ++k)
        for (std::size_t i = 0; i < n_; ++i)
            if (test(i, k))
                or_row(i, k);
}

// ---------------------------------------------------------------- Poset

Poset::Poset(std::size_t size, BitMatrix leq, std::vector<std::string> labels)
    : size_(size), leq_(std::move(leq)), labels_(std::move(labels)), upper_covers_(size), lower_covers_(size)
{
    if (!labels_.empty() && labels_.size() != size_)
        throw std::invalid_argument("poset: label count does not match size");
    for (std::size_t a = 0; a < size_; ++a) {
        if (!leq_.test(a, a))
            throw std::invalid_argument("poset: relation is not reflexive at " + std::to_string(a));
        for (std::size_t b = a + 1; b < size_; ++b)
            if (leq_.test(a, b) && leq_.test(b, a))
                throw std::invalid_argument("poset: relation is not antisymmetric at (" + std::to_string(a) +
                                            "," + std::to_string(b) + ")");
    }
    // b covers a iff a < b and b is not strictly above some c with a < c.
    BitMatrix strict = leq_;
    for (std::size_t a = 0; a < size_; ++a)
        strict.reset(a, a);
    BitMatrix above_above(size_);
    for (std::size_t a = 0; a < size_; ++a)
        for (std::size_t c = 0; c < size_; ++c)
            if (strict.test(a, c))
                above_above.or_row_from(a, strict, c);
    for (std::size_t a = 0; a < size_; ++a)
        for (std::size_t b = 0; b < size_; ++b)
            if (strict.test(a, b) && !above_above.test(a, b)) {
                upper_covers_[a].push_back(static_cast<ElementId>(b));
                lower_covers_[b].push_back(static_cast<ElementId>(a));
            }
}

Poset Poset::from_relation(std::size_t size, const std::function<bool(ElementId, ElementId)>& leq,
                           std::vector<std::string> labels)
{
    BitMatrix m(size);
    for (std::size_t a = 0; a < size; ++a)
        for (std::size_t b = 0; b < size; ++b)
            if (leq(static_cast<ElementId>(a), static_cast<ElementId>(b)))
                m.set(a, b);
    BitMatrix closed = m;
    closed.transitive_closure();
    if (!(closed == m))
        throw std::invalid_argument("poset: relation is not transitive");
    return Poset(size, std::move(m), std::move(labels));
}

Poset Poset::from_generators(std::size_t size, std::span<const ElementPair> relations,
                             std::vector<std::string> labels)
{
    BitMatrix m(size);
    for (std::size_t a = 0; a < size; ++a)
        m.set(a, a);
    for (auto [a, b] : relations) {
        if (a >= size || b >= size)
            throw std::invalid_argument("poset: relation refers to an element out of range");
        m.set(a, b);
    }
    m.transitive_closure();
    return Poset(size, std::move(m), std::move(labels));
}

Poset Poset::induced(const Poset& parent, const ElementSet& ids)
{
    const std::size_t m = ids.size();
    BitMatrix leq(m);
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j)
            if (parent.leq(ids[i], ids[j]))
                leq.set(i, j);
        if (!parent.labels().empty())
            labels.push_back(parent.label(ids[i]));
    }
    return Poset(m, std::move(leq), std::move(labels));
}

std::string Poset::label(ElementId a) const
{
    if (labels_.empty())
        return std::to_string(a);
    return labels_[a];
}

ElementSet Poset::strict_upper_set(ElementId a) const
{
    ElementSet out;
    for (ElementId b = 0; b < size_; ++b)
        if (less(a, b))
            out.push_back(b);
    return out;
}

std::vector<ElementPair> Poset::leq_pairs() const
{
    std::vector<ElementPair> out;
    for (ElementId a = 0; a < size_; ++a)
        for (ElementId b = 0; b < size_; ++b)
            if (leq(a, b))
                out.emplace_back(a, b);
    return out;
}

std::vector<ElementPair> Poset::cover_pairs() const
{
    std::vector<ElementPair> out;
    for (ElementId a = 0; a < size_; ++a)
        for (ElementId b : upper_covers_[a])
            out.emplace_back(a, b);
    return out;
}

std::vector<int> Poset::upper_heights() const
{
    // Process elements in an order where everything above comes first.
    std::vector<int> h(size_, -1);
    std::function<int(ElementId)> visit = [&](ElementId a) -> int {
        if (h[a] >= 0)
            return h[a];
        int best = 0;
        for (ElementId b : upper_covers_[a])
            best = std::max(best, visit(b) + 1);
        return h[a] = best;
    };
    for (ElementId a = 0; a < size_; ++a)
        visit(a);
    return h;
}

// ---------------------------------------------------------------- RelPoset

RelPoset::RelPoset(Poset base, BitMatrix marks) : base_(std::move(base)), marks_(std::move(marks))
{
    close_and_validate();
}

RelPoset::RelPoset(Poset base, BitMatrix marks, bool already_closed)
    : base_(std::move(base)), marks_(std::move(marks))
{
    if (!already_closed)
        close_and_validate();
}

RelPoset RelPoset::induced(const RelPoset& parent, const ElementSet& ids)
{
    const std::size_t m = ids.size();
    BitMatrix marks(m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j)
            if (parent.marked(ids[i], ids[j]))
                marks.set(i, j);
    return RelPoset(Poset::induced(parent.poset(), ids), std::move(marks), true);
}

RelPoset::RelPoset(Poset base, std::span<const ElementPair> generator_marks) : base_(std::move(base))
{
    marks_ = BitMatrix(base_.size());
    for (auto [a, b] : generator_marks) {
        if (a >= base_.size() || b >= base_.size())
            throw std::invalid_argument("relposet: marked pair out of range");
        marks_.set(a, b);
    }
    close_and_validate();
}

RelPoset RelPoset::minimal(Poset base)
{
    return RelPoset(std::move(base), std::span<const ElementPair>{});
}

RelPoset RelPoset::maximal(Poset base)
{
    BitMatrix m = base.relation();
    return RelPoset(std::move(base), std::move(m));
}

RelPoset RelPoset::from_mark_predicate(Poset base, const std::function<bool(ElementId, ElementId)>& marked)
{
    BitMatrix m(base.size());
    for (ElementId a = 0; a < base.size(); ++a)
        for (ElementId b = 0; b < base.size(); ++b)
            if (base.leq(a, b) && marked(a, b))
                m.set(a, b);
    return RelPoset(std::move(base), std::move(m));
}

void RelPoset::close_and_validate()
{
    for (std::size_t a = 0; a < base_.size(); ++a)
        marks_.set(a, a);
    marks_.transitive_closure();
    for (ElementId a = 0; a < base_.size(); ++a)
        for (ElementId b = 0; b < base_.size(); ++b)
            if (marks_.test(a, b) && !base_.leq(a, b))
                throw std::invalid_argument("relposet: marked pair (" + base_.label(a) + "," + base_.label(b) +
                                            ") is not an order relation");
}

std::vector<ElementPair> RelPoset::marked_pairs(bool include_identities) const
{
    std::vector<ElementPair> out;
    for (ElementId a = 0; a < size(); ++a)
        for (ElementId b = 0; b < size(); ++b)
            if (marks_.test(a, b) && (include_identities || a != b))
                out.emplace_back(a, b);
    return out;
}

std::vector<ElementPair> RelPoset::irreducible_marks() const
{
    std::vector<ElementPair> out;
    for (ElementId a = 0; a < size(); ++a)
        for (ElementId b = 0; b < size(); ++b) {
            if (a == b || !marks_.test(a, b))
                continue;
            bool composite = false;
            for (ElementId c = 0; c < size() && !composite; ++c)
                composite = c != a && c != b && marks_.test(a, c) && marks_.test(c, b);
            if (!composite)
                out.emplace_back(a, b);
        }
    return out;
}

bool RelPoset::closure_is_idempotent() const
{
    BitMatrix again = marks_;
    for (std::size_t a = 0; a < size(); ++a)
        again.set(a, a);
    again.transitive_closure();
    return again == marks_;
}

// ---------------------------------------------------------------- maps

MonotoneMap::MonotoneMap(RelPosetPtr source, RelPosetPtr target, std::vector<ElementId> assignment)
    : source_(std::move(source)), target_(std::move(target)), assignment_(std::move(assignment))
{
    if (assignment_.size() != source_->size())
        throw std::invalid_argument("monotone map: assignment size does not match source");
    for (ElementId v : assignment_)
        if (v >= target_->size())
            throw std::invalid_argument("monotone map: value out of range");
    for (ElementId a = 0; a < source_->size(); ++a)
        for (ElementId b : source_->poset().upper_covers(a))
            if (!target_->leq(assignment_[a], assignment_[b]))
                throw std::invalid_argument("monotone map: order not preserved on (" + source_->label(a) + "," +
                                            source_->label(b) + ")");
}

MonotoneMap MonotoneMap::identity(RelPosetPtr p)
{
    std::vector<ElementId> id(p->size());
    for (ElementId a = 0; a < id.size(); ++a)
        id[a] = a;
    return MonotoneMap(p, p, std::move(id));
}

bool is_relative_map(const MonotoneMap& f)
{
    const RelPoset& s = *f.source();
    const RelPoset& t = *f.target();
    for (auto [a, b] : s.marked_pairs(false))
        if (!t.marked(f(a), f(b)))
            return false;
    return true;
}

std::optional<ElementId> Subposet::local(ElementId parent_id) const
{
    auto it = std::lower_bound(to_parent.begin(), to_parent.end(), parent_id);
    if (it == to_parent.end() || *it != parent_id)
        return std::nullopt;
    return static_cast<ElementId>(it - to_parent.begin());
}

Subposet full_subposet(const RelPoset& parent, const ElementSet& elements)
{
    ElementSet sorted = elements;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    for (ElementId e : sorted)
        if (e >= parent.size())
            throw std::invalid_argument("full subposet: element out of range");
    auto rp = std::make_shared<RelPoset>(RelPoset::induced(parent, sorted));
    return Subposet{std::move(rp), std::move(sorted)};
}

// ---------------------------------------------------------------- simplices

RelPoset build_simplex(int n, std::span<const ElementPair> generator_marks)
{
    if (n < 0)
        throw std::invalid_argument("build_simplex: n must be non-negative");
    for (auto [i, j] : generator_marks)
        if (i > j || j > static_cast<ElementId>(n))
            throw std::invalid_argument("build_simplex: pair " + std::to_string(i) + "-" + std::to_string(j) +
                                        " out of range for n = " + std::to_string(n));
    const std::size_t size = static_cast<std::size_t>(n) + 1;
    Poset base = Poset::from_relation(size, [](ElementId a, ElementId b) { return a <= b; });
    return RelPoset(std::move(base), generator_marks);
}

std::vector<ElementPair> parse_structure(const std::string& text)
{
    std::string s = text;
    auto eq = s.find('=');
    if (eq != std::string::npos) {
        std::string head = s.substr(0, eq);
        head.erase(std::remove_if(head.begin(), head.end(), ::isspace), head.end());
        if (head != "we")
            throw std::invalid_argument("structure: expected `we =` prefix, got `" + head + "`");
        s = s.substr(eq + 1);
    }
    std::vector<ElementPair> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item.erase(std::remove_if(item.begin(), item.end(), ::isspace), item.end());
        if (item.empty())
            continue;
        auto dash = item.find('-');
        if (dash == std::string::npos || dash == 0 || dash + 1 == item.size())
            throw std::invalid_argument("structure: malformed pair `" + item + "`");
        try {
            std::size_t used = 0;
            long a = std::stol(item.substr(0, dash), &used);
            if (used != dash)
                throw std::invalid_argument("");
            std::string rest = item.substr(dash + 1);
            long b = std::stol(rest, &used);
            if (used != rest.size() || a < 0 || b < 0)
                throw std::invalid_argument("");
            out.emplace_back(static_cast<ElementId>(a), static_cast<ElementId>(b));
        } catch (const std::exception&) {
            throw std::invalid_argument("structure: malformed pair `" + item + "`");
        }
    }
    return out;
}

std::string format_structure(const RelPoset& p)
{
    std::string out;
    for (auto [a, b] : p.marked_pairs(false)) {
        if (!out.empty())
            out += ",";
        out += std::to_string(a) + "-" + std::to_string(b);
    }
    return out;
}

std::vector<RelPoset> all_relative_structures(int n)
{
    if (n < 0)
        throw std::invalid_argument("all_relative_structures: n must be non-negative");
    std::vector<ElementPair> pairs;
    for (int i = 0; i <= n; ++i)
        for (int j = i + 1; j <= n; ++j)
            pairs.emplace_back(i, j);
    if (pairs.size() > 20)
        throw std::invalid_argument("all_relative_structures: n too large for enumeration");
    std::map<std::vector<ElementPair>, RelPoset> seen;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << pairs.size()); ++mask) {
        std::vector<ElementPair> gens;
        for (std::size_t b = 0; b < pairs.size(); ++b)
            if ((mask >> b) & 1U)
                gens.push_back(pairs[b]);
        RelPoset p = build_simplex(n, gens);
        auto key = p.marked_pairs(false);
        seen.emplace(std::move(key), std::move(p));
    }
    std::vector<std::pair<std::vector<ElementPair>, RelPoset>> sorted(seen.begin(), seen.end());
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const auto& x, const auto& y) { return x.first.size() < y.first.size(); });
    std::vector<RelPoset> out;
    for (auto& [k, p] : sorted)
        out.push_back(std::move(p));
    return out;
}

// ---------------------------------------------------------------- utilities

RelPoset product(const RelPoset& p, const RelPoset& q)
{
    const std::size_t np = p.size(), nq = q.size();
    std::vector<std::string> labels;
    labels.reserve(np * nq);
    for (ElementId a = 0; a < np; ++a)
        for (ElementId b = 0; b < nq; ++b)
            labels.push_back("(" + p.label(a) + "," + q.label(b) + ")");
    auto split = [nq](ElementId x) { return std::pair<ElementId, ElementId>(x / nq, x % nq); };
    Poset base = Poset::from_relation(
        np * nq,
        [&](ElementId x, ElementId y) {
            auto [a, b] = split(x);
            auto [c, d] = split(y);
            return p.leq(a, c) && q.leq(b, d);
        },
        std::move(labels));
    return RelPoset::from_mark_predicate(std::move(base), [&](ElementId x, ElementId y) {
        auto [a, b] = split(x);
        auto [c, d] = split(y);
        return p.marked(a, c) && q.marked(b, d);
    });
}

ElementSet vplus(const RelPoset& d, const ElementSet& c)
{
    ElementSet out;
    for (ElementId x = 0; x < d.size(); ++x)
        for (ElementId y : c)
            if (d.leq(y, x)) {
                out.push_back(x);
                break;
            }
    return out;
}

bool is_cosieve(const RelPoset& d, const ElementSet& a)
{
    std::vector<char> in(d.size(), 0);
    for (ElementId x : a)
        in[x] = 1;
    for (ElementId x : a)
        for (ElementId y = 0; y < d.size(); ++y)
            if (d.leq(x, y) && !in[y])
                return false;
    return true;
}

Subposet comma_fiber(const MonotoneMap& i, ElementId d)
{
    ElementSet sel;
    for (ElementId a = 0; a < i.source()->size(); ++a)
        if (i.target()->leq(i(a), d))
            sel.push_back(a);
    return full_subposet(*i.source(), sel);
}

Subposet under_fiber(const MonotoneMap& i, ElementId d)
{
    ElementSet sel;
    for (ElementId a = 0; a < i.source()->size(); ++a)
        if (i.target()->leq(d, i(a)))
            sel.push_back(a);
    return full_subposet(*i.source(), sel);
}

bool check_galois_connection(const MonotoneMap& lambda, const MonotoneMap& rho)
{
    if (lambda.source() != rho.target() || lambda.target() != rho.source()) {
        // Allow structurally equal posets held through different pointers.
        if (lambda.source()->size() != rho.target()->size() || lambda.target()->size() != rho.source()->size())
            return false;
    }
    const RelPoset& p = *lambda.source();
    const RelPoset& q = *lambda.target();
    for (ElementId a = 0; a < p.size(); ++a)
        for (ElementId b = 0; b < q.size(); ++b)
            if (q.leq(lambda(a), b) != p.leq(a, rho(b)))
                return false;
    return true;
}

std::optional<ElementId> maximum(const RelPoset& p, const ElementSet& elements)
{
    for (ElementId x : elements) {
        bool top = true;
        for (ElementId y : elements)
            if (!p.leq(y, x)) {
                top = false;
                break;
            }
        if (top)
            return x;
    }
    return std::nullopt;
}

bool is_order_isomorphism(const RelPoset& a, const RelPoset& b, const std::vector<ElementId>& f, bool check_marks)
{
    if (a.size() != b.size() || f.size() != a.size())
        return false;
    std::vector<char> hit(b.size(), 0);
    for (ElementId v : f) {
        if (v >= b.size() || hit[v])
            return false;
        hit[v] = 1;
    }
    for (ElementId x = 0; x < a.size(); ++x)
        for (ElementId y = 0; y < a.size(); ++y) {
            if (a.leq(x, y) != b.leq(f[x], f[y]))
                return false;
            if (check_marks && a.marked(x, y) != b.marked(f[x], f[y]))
                return false;
        }
    return true;
}

nlohmann::json to_json(const RelPoset& p)
{
    nlohmann::json j;
    nlohmann::json elems = nlohmann::json::array();
    for (ElementId a = 0; a < p.size(); ++a)
        elems.push_back(p.label(a));
    j["elements"] = elems;
    nlohmann::json leq = nlohmann::json::array();
    for (auto [a, b] : p.poset().leq_pairs())
        leq.push_back({a, b});
    j["leq_pairs"] = leq;
    nlohmann::json marks = nlohmann::json::array();
    for (auto [a, b] : p.marked_pairs())
        marks.push_back({a, b});
    j["marked_pairs"] = marks;
    return j;
}

ElementSet all_elements(const RelPoset& p)
{
    ElementSet out(p.size());
    for (ElementId a = 0; a < p.size(); ++a)
        out[a] = a;
    return out;
}

} // namespace relcat
