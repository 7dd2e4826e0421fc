#include "relcat/diagram.hpp"

#include <algorithm>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace relcat {

namespace {

bool same_shape(const ChainComplexQ& a, const ChainComplexQ& b)
{
    const int lo = std::min(a.lo(), b.lo()), hi = std::max(a.hi(), b.hi());
    for (int k = lo; k <= hi; ++k)
        if (a.dim(k) != b.dim(k))
            return false;
    return true;
}

bool same_components(const ChainMap& a, const ChainMap& b)
{
    const ChainComplexQ& s = a.source();
    for (int k = s.lo(); k <= s.hi(); ++k)
        if (!(a.at(k) == b.at(k)))
            return false;
    return true;
}

std::string pair_text(const RelPoset& p, ElementId x, ElementId y)
{
    return p.label(x) + " -> " + p.label(y);
}

} // namespace

// ---------------------------------------------------------------- diagrams

Diagram::Diagram(RelPosetPtr index, std::vector<ComplexPtr> objects, std::map<ElementPair, ChainMap> arrows,
                 bool relative_flag)
    : index_(std::move(index)), objects_(std::move(objects)), arrows_(std::move(arrows)), relative_(relative_flag)
{
    if (!index_)
        throw std::invalid_argument("Diagram: null index");
    if (objects_.size() != index_->size())
        throw std::invalid_argument("Diagram: one object per element expected");
    for (const auto& o : objects_)
        if (!o)
            throw std::invalid_argument("Diagram: null object");
    std::size_t covers = 0;
    for (ElementId x = 0; x < size(); ++x)
        for (ElementId y : index_->poset().upper_covers(x)) {
            ++covers;
            auto it = arrows_.find({x, y});
            if (it == arrows_.end())
                throw std::invalid_argument("Diagram: no arrow for " + pair_text(*index_, x, y));
            if (!same_shape(it->second.source(), *objects_[x]) || !same_shape(it->second.target(), *objects_[y]))
                throw std::invalid_argument("Diagram: arrow " + pair_text(*index_, x, y) +
                                            " does not match its objects");
        }
    if (covers != arrows_.size())
        throw std::invalid_argument("Diagram: arrows given for pairs that are not covers");
}

ChainMap Diagram::arrow(ElementId x, ElementId y) const
{
    if (!index_->leq(x, y))
        throw std::invalid_argument("Diagram::arrow: " + pair_text(*index_, x, y) + " is not a relation");
    if (x == y)
        return ChainMap::identity(objects_[x]);
    auto it = arrows_.find({x, y});
    if (it != arrows_.end())
        return it->second;
    {
        std::lock_guard<std::mutex> lock(cache_mutex_);
        auto c = cache_.find({x, y});
        if (c != cache_.end())
            return *c->second;
    }
    ElementId z = 0;
    for (ElementId c : index_->poset().upper_covers(x))
        if (index_->leq(c, y)) {
            z = c;
            break;
        }
    auto m = std::make_shared<const ChainMap>(arrow(z, y).after(arrows_.at({x, z})));
    std::lock_guard<std::mutex> lock(cache_mutex_);
    cache_.emplace(ElementPair{x, y}, m);
    return *m;
}

std::string Diagram::functoriality_error() const
{
    // Composites agree along all paths iff for every x < y all first steps
    // x -> z agree after composing with the (inductively unique) z -> y.
    for (ElementId x = 0; x < size(); ++x) {
        const auto& covers = index_->poset().upper_covers(x);
        if (covers.size() < 2)
            continue;
        for (ElementId y = 0; y < size(); ++y) {
            if (!index_->less(x, y))
                continue;
            std::optional<ChainMap> first;
            for (ElementId z : covers) {
                if (!index_->leq(z, y))
                    continue;
                ChainMap m = arrow(z, y).after(arrows_.at({x, z}));
                if (!first)
                    first.emplace(std::move(m));
                else if (!same_components(*first, m))
                    return "paths from " + index_->label(x) + " to " + index_->label(y) + " through " +
                           index_->label(z) + " disagree";
            }
        }
    }
    return {};
}

std::string Diagram::relativity_error(bool all_pairs) const
{
    const auto pairs = all_pairs ? index_->marked_pairs(false) : index_->irreducible_marks();
    for (auto [x, y] : pairs) {
        if (x == y)
            continue;
        const QuasiIsoReport r = quasi_iso_report(arrow(x, y));
        if (!r.ok)
            return "marked arrow " + pair_text(*index_, x, y) + " is not a quasi-isomorphism: " + r.describe();
    }
    return {};
}

void Diagram::validate() const
{
    if (auto e = functoriality_error(); !e.empty())
        throw std::logic_error("Diagram: " + e);
    if (relative_)
        if (auto e = relativity_error(); !e.empty())
            throw std::logic_error("Diagram: " + e);
}

Diagram Diagram::restricted(const ElementSet& elements) const
{
    auto sub = std::make_shared<const RelPoset>(RelPoset::induced(*index_, elements));
    std::vector<ComplexPtr> objs;
    for (ElementId e : elements)
        objs.push_back(objects_.at(e));
    std::map<ElementPair, ChainMap> arr;
    for (ElementId a = 0; a < sub->size(); ++a)
        for (ElementId b : sub->poset().upper_covers(a))
            arr.emplace(ElementPair{a, b}, arrow(elements[a], elements[b]));
    return Diagram(sub, std::move(objs), std::move(arr), relative_);
}

nlohmann::json Diagram::to_json() const
{
    nlohmann::json objs = nlohmann::json::array();
    for (const auto& o : objects_)
        objs.push_back(o->to_json());
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& [p, m] : arrows_) {
        nlohmann::json comp = nlohmann::json::object();
        for (int k = m.source().lo(); k <= m.source().hi(); ++k) {
            QMatrix a = m.at(k);
            if (!a.is_zero())
                comp[std::to_string(k)] = a.to_json();
        }
        arr.push_back({{"from", p.first}, {"to", p.second}, {"components", comp}});
    }
    return {{"index", relcat::to_json(*index_)}, {"objects", objs}, {"arrows", arr}, {"relative", relative_}};
}

Diagram Diagram::from_json(const nlohmann::json& j)
{
    const auto& ij = j.at("index");
    std::vector<std::string> labels = ij.at("elements").get<std::vector<std::string>>();
    std::vector<ElementPair> leq, marks;
    for (const auto& p : ij.at("leq_pairs"))
        leq.emplace_back(p.at(0).get<ElementId>(), p.at(1).get<ElementId>());
    for (const auto& p : ij.at("marked_pairs"))
        marks.emplace_back(p.at(0).get<ElementId>(), p.at(1).get<ElementId>());
    const std::size_t n = labels.size();
    auto index = std::make_shared<const RelPoset>(Poset::from_generators(n, leq, std::move(labels)), marks);
    std::vector<ComplexPtr> objs;
    for (const auto& o : j.at("objects"))
        objs.push_back(make_complex(ChainComplexQ::from_json(o)));
    std::map<ElementPair, ChainMap> arr;
    for (const auto& a : j.at("arrows")) {
        const auto x = a.at("from").get<ElementId>(), y = a.at("to").get<ElementId>();
        std::map<int, QMatrix> comp;
        for (const auto& [k, m] : a.at("components").items())
            comp.emplace(std::stoi(k), QMatrix::from_json(m));
        arr.emplace(ElementPair{x, y}, ChainMap(objs.at(x), objs.at(y), std::move(comp)));
    }
    return Diagram(index, std::move(objs), std::move(arr), j.at("relative").get<bool>());
}

// ---------------------------------------------------------------- inverse structure

InverseStructure InverseStructure::colength(const Poset& p)
{
    return {p.upper_heights()};
}

std::string InverseStructure::validation_error(const Poset& p) const
{
    if (degree.size() != p.size())
        return "degree function has the wrong size";
    for (ElementId x = 0; x < p.size(); ++x) {
        if (degree[x] < 0)
            return "negative degree at " + p.label(x);
        for (ElementId y : p.upper_covers(x))
            if (degree[y] >= degree[x])
                return "degree does not drop along " + p.label(x) + " < " + p.label(y);
    }
    return {};
}

std::vector<ElementId> InverseStructure::processing_order() const
{
    std::vector<ElementId> order(degree.size());
    for (ElementId i = 0; i < order.size(); ++i)
        order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](ElementId a, ElementId b) { return degree[a] < degree[b]; });
    return order;
}

// ---------------------------------------------------------------- limits

Limit limit(const Diagram& f)
{
    std::vector<ComplexPtr> parts;
    for (ElementId x = 0; x < f.size(); ++x)
        parts.push_back(f.object(x));
    std::vector<ElementPair> covers;
    std::vector<ComplexPtr> targets;
    for (const auto& [p, m] : f.cover_arrows()) {
        covers.push_back(p);
        targets.push_back(f.object(p.second));
    }
    Limit out;
    out.product = std::make_shared<DirectSum>(direct_sum(parts));
    const ComplexPtr& prod = out.product->sum;
    if (covers.empty()) {
        auto id = std::make_shared<ChainMap>(ChainMap::identity(prod));
        out.kernel = std::make_shared<KernelComplex>();
        out.kernel->kernel = prod;
        out.kernel->inclusion = id;
        for (int k = prod->lo(); k <= prod->hi(); ++k)
            out.kernel->data.emplace(k, kernel(QMatrix(0, prod->dim(k))));
    } else {
        const DirectSum tgt = direct_sum(targets);
        std::optional<ChainMap> phi;
        for (std::size_t c = 0; c < covers.size(); ++c) {
            const auto [x, y] = covers[c];
            ChainMap term = tgt.inclusions[c].after(f.cover_arrows().at(covers[c]).after(out.product->projections[x])) -
                            tgt.inclusions[c].after(out.product->projections[y]);
            phi = phi ? *phi + term : term;
        }
        out.kernel = std::make_shared<KernelComplex>(kernel_complex(*phi));
    }
    out.object = out.kernel->kernel;
    for (ElementId x = 0; x < f.size(); ++x)
        out.projections.push_back(out.product->projections[x].after(*out.kernel->inclusion));
    return out;
}

ChainMap Limit::lift(const std::vector<ChainMap>& cone) const
{
    if (cone.size() != product->inclusions.size())
        throw std::invalid_argument("Limit::lift: one map per element expected");
    std::optional<ChainMap> into;
    for (std::size_t i = 0; i < cone.size(); ++i) {
        ChainMap t = product->inclusions[i].after(cone[i]);
        into = into ? *into + t : t;
    }
    return kernel->lift(*into);
}

std::string cone_error(const Diagram& f, const std::vector<ChainMap>& cone)
{
    for (const auto& [p, m] : f.cover_arrows())
        if (!same_components(m.after(cone.at(p.first)), cone.at(p.second)))
            return "cone does not commute over " + pair_text(f.index(), p.first, p.second);
    return {};
}

// ---------------------------------------------------------------- chain model

ChainModel::ChainModel(DiagramPtr f, ElementSet elements) : f_(std::move(f)), elements_(std::move(elements))
{
    const RelPoset& idx = f_->index();
    std::vector<ElementId> cur;
    std::function<void()> extend = [&] {
        chain_index_.emplace(cur, chains_.size());
        chains_.push_back(cur);
        for (ElementId v : elements_)
            if (idx.less(cur.back(), v)) {
                cur.push_back(v);
                extend();
                cur.pop_back();
            }
    };
    for (ElementId u : elements_) {
        if (u >= f_->size())
            throw std::invalid_argument("ChainModel: element out of range");
        cur = {u};
        extend();
    }

    bool any = false;
    for (const auto& c : chains_) {
        const ComplexPtr& o = f_->object(c.back());
        if (o->total_dim() == 0)
            continue;
        const int shift = static_cast<int>(c.size()) - 1;
        const int a = o->lo() - shift, b = o->hi() - shift;
        if (!any) {
            lo_ = a;
            hi_ = b;
            any = true;
        } else {
            lo_ = std::min(lo_, a);
            hi_ = std::max(hi_, b);
        }
    }
    if (!any) {
        complex_ = make_complex(ChainComplexQ());
        return;
    }
    for (int k = lo_; k <= hi_; ++k) {
        auto& off = offsets_[k];
        off.assign(chains_.size() + 1, 0);
        for (std::size_t c = 0; c < chains_.size(); ++c)
            off[c + 1] = off[c] + block_dim(c, k);
    }
    auto total = [&](int k) { return k < lo_ || k > hi_ ? std::size_t{0} : offsets_.at(k).back(); };

    std::vector<std::size_t> dims;
    std::vector<QMatrix> diffs;
    for (int k = lo_; k <= hi_; ++k) {
        dims.push_back(total(k));
        if (k == lo_)
            continue;
        MatrixBuilder m(total(k - 1), total(k));
        const auto& roff = offsets_.at(k - 1);
        const auto& coff = offsets_.at(k);
        for (std::size_t ci = 0; ci < chains_.size(); ++ci) {
            const std::size_t rdim = block_dim(ci, k - 1);
            if (rdim == 0)
                continue;
            const auto& c = chains_[ci];
            const int j = static_cast<int>(c.size()) - 1;
            const ElementId last = c.back();
            const long sj = j % 2 == 0 ? 1 : -1;
            // internal differential of the summand
            if (block_dim(ci, k) > 0)
                m.add_block(roff[ci], coff[ci], f_->object(last)->d(k + j), sj);
            // deleting w_i for i < j
            for (int i = 0; i < j; ++i) {
                std::vector<ElementId> face = c;
                face.erase(face.begin() + i);
                const std::size_t fi = chain_index_.at(face);
                m.add_identity(roff[ci], coff[fi], rdim, i % 2 == 0 ? -1 : 1);
            }
            // the last step, through the diagram
            if (j >= 1) {
                std::vector<ElementId> face(c.begin(), c.end() - 1);
                const std::size_t fi = chain_index_.at(face);
                if (block_dim(fi, k) > 0)
                    m.add_block(roff[ci], coff[fi], f_->arrow(c[j - 1], last).at(k + j - 1), -sj);
            }
        }
        diffs.push_back(m.build());
    }
    complex_ = make_complex(ChainComplexQ(lo_, std::move(dims), std::move(diffs)));
}

std::size_t ChainModel::block_dim(std::size_t chain, int k) const
{
    const auto& c = chains_[chain];
    return f_->object(c.back())->dim(k + static_cast<int>(c.size()) - 1);
}

std::optional<std::size_t> ChainModel::offset(std::size_t chain, int k) const
{
    auto it = offsets_.find(k);
    if (it == offsets_.end() || block_dim(chain, k) == 0)
        return std::nullopt;
    return it->second[chain];
}

ChainMap ChainModel::evaluation(ElementId d) const
{
    auto it = chain_index_.find({d});
    if (it == chain_index_.end())
        throw std::invalid_argument("ChainModel::evaluation: element not in the subposet");
    const ComplexPtr& target = f_->object(d);
    std::map<int, QMatrix> comp;
    for (int k = lo_; k <= hi_; ++k) {
        if (auto o = offset(it->second, k)) {
            MatrixBuilder m(target->dim(k), complex_->dim(k));
            m.add_identity(0, *o, target->dim(k));
            comp.emplace(k, m.build());
        }
    }
    return ChainMap(complex_, target, std::move(comp));
}

ChainMap ChainModel::restriction(const ChainModel& smaller) const
{
    if (smaller.f_ != f_)
        throw std::invalid_argument("ChainModel::restriction: different diagrams");
    std::map<int, QMatrix> comp;
    for (int k = smaller.lo_; k <= smaller.hi_; ++k) {
        MatrixBuilder m(smaller.complex_->dim(k), complex_->dim(k));
        for (std::size_t c = 0; c < smaller.chains_.size(); ++c) {
            const auto so = smaller.offset(c, k);
            if (!so)
                continue;
            auto it = chain_index_.find(smaller.chains_[c]);
            if (it == chain_index_.end())
                throw std::invalid_argument("ChainModel::restriction: not a subposet");
            m.add_identity(*so, *offset(it->second, k), smaller.block_dim(c, k));
        }
        comp.emplace(k, m.build());
    }
    return ChainMap(complex_, smaller.complex_, std::move(comp));
}

ChainMap ChainModel::coaugmentation(ElementId u) const
{
    const ComplexPtr& source = f_->object(u);
    for (ElementId v : elements_)
        if (!f_->index().leq(u, v))
            throw std::invalid_argument("ChainModel::coaugmentation: element is not below the subposet");
    std::map<int, QMatrix> comp;
    for (int k = source->lo(); k <= source->hi(); ++k) {
        if (complex_->dim(k) == 0 || source->dim(k) == 0)
            continue;
        MatrixBuilder m(complex_->dim(k), source->dim(k));
        for (ElementId v : elements_) {
            const auto o = offset(chain_index_.at({v}), k);
            if (o)
                m.add_block(*o, 0, f_->arrow(u, v).at(k));
        }
        comp.emplace(k, m.build());
    }
    return ChainMap(source, complex_, std::move(comp));
}

// ---------------------------------------------------------------- replacement

namespace {

// F'(u) against the factorization of F(u) -> M_u: the coordinates of
// B = F(u) + M_u + M_u[1] are a permutation of those of the model.
void compare_with_factorization(const ChainModel& fu, const ChainModel& mu, ElementId u, const ChainMap& eta,
                                const ChainMap& matching)
{
    const Factorization fact = factorize(mu.coaugmentation(u));
    const ChainComplexQ& b = *fact.middle;
    const ChainComplexQ& model = *fu.complex();
    const ChainComplexQ& a = fact.s->source();
    const ChainComplexQ& m = *mu.complex();
    std::map<std::vector<ElementId>, std::size_t> index;
    for (std::size_t c = 0; c < fu.chains().size(); ++c)
        index.emplace(fu.chains()[c], c);
    const std::size_t self = index.at({u});

    std::map<int, QMatrix> q;
    const int lo = std::min(b.lo(), model.lo()), hi = std::max(b.hi(), model.hi());
    for (int k = lo; k <= hi; ++k) {
        if (b.dim(k) != model.dim(k))
            throw std::logic_error("reedy_replace: dimension differs from the factorization at " +
                                   fu.diagram()->index().label(u));
        if (b.dim(k) == 0)
            continue;
        MatrixBuilder p(model.dim(k), b.dim(k));
        std::size_t col = 0;
        if (a.dim(k) > 0)
            p.add_identity(*fu.offset(self, k), col, a.dim(k));
        col += a.dim(k);
        for (std::size_t c = 0; c < mu.chains().size(); ++c)
            if (auto o = mu.offset(c, k))
                p.add_identity(*fu.offset(index.at(mu.chains()[c]), k), col + *o, fu.diagram()->object(mu.chains()[c].back())->dim(k + static_cast<int>(mu.chains()[c].size()) - 1));
        col += m.dim(k);
        for (std::size_t c = 0; c < mu.chains().size(); ++c)
            if (auto o = mu.offset(c, k + 1)) {
                std::vector<ElementId> longer{u};
                longer.insert(longer.end(), mu.chains()[c].begin(), mu.chains()[c].end());
                const std::size_t li = index.at(longer);
                p.add_identity(*fu.offset(li, k), col + *o, fu.diagram()->object(longer.back())->dim(k + static_cast<int>(longer.size()) - 1));
            }
        q.emplace(k, p.build());
    }
    // q is a chain isomorphism B -> F'(u) carrying s to eta and p to the
    // matching map
    const ChainMap iso(fact.middle, fu.complex(), std::move(q));
    for (int k = b.lo(); k <= b.hi(); ++k)
        if (rank(iso.at(k)) != b.dim(k))
            throw std::logic_error("reedy_replace: coordinate map is not a bijection");
    if (!same_components(iso.after(*fact.s), eta))
        throw std::logic_error("reedy_replace: eta differs from the factorization section");
    if (!same_components(matching.after(iso), *fact.p))
        throw std::logic_error("reedy_replace: matching map differs from the factorization fibration");
}

} // namespace

ReedyReplacement reedy_replace(const DiagramPtr& f, const InverseStructure& inv, bool check_factorization)
{
    if (auto e = inv.validation_error(f->index().poset()); !e.empty())
        throw std::invalid_argument("reedy_replace: " + e);
    const std::size_t n = f->size();
    ReedyReplacement r;
    r.source = f;
    r.inverse = inv;
    r.fibrant.resize(n);
    r.matching.resize(n);
    std::vector<std::optional<ChainMap>> eta(n), match(n), retr(n);
    for (ElementId u : inv.processing_order()) {
        ElementSet up, strict;
        for (ElementId v = 0; v < n; ++v)
            if (f->index().leq(u, v)) {
                up.push_back(v);
                if (v != u)
                    strict.push_back(v);
            }
        // everything strictly above u was handled before
        for (ElementId v : strict)
            if (!r.fibrant[v])
                throw std::logic_error("reedy_replace: processing order visits " + f->index().label(u) +
                                       " before " + f->index().label(v));
        r.matching[u] = std::make_shared<const ChainModel>(f, strict);
        r.fibrant[u] = std::make_shared<const ChainModel>(f, up);
        eta[u].emplace(r.fibrant[u]->coaugmentation(u));
        match[u].emplace(r.fibrant[u]->restriction(*r.matching[u]));
        retr[u].emplace(r.fibrant[u]->evaluation(u));
        if (check_factorization)
            compare_with_factorization(*r.fibrant[u], *r.matching[u], u, *eta[u], *match[u]);
    }
    std::vector<ComplexPtr> objs;
    std::map<ElementPair, ChainMap> arrows;
    for (ElementId u = 0; u < n; ++u) {
        objs.push_back(r.fibrant[u]->complex());
        r.eta.push_back(*eta[u]);
        r.matching_maps.push_back(*match[u]);
        r.retractions.push_back(*retr[u]);
    }
    for (ElementId u = 0; u < n; ++u)
        for (ElementId w : f->index().poset().upper_covers(u))
            arrows.emplace(ElementPair{u, w}, r.fibrant[u]->restriction(*r.fibrant[w]));
    r.replaced = std::make_shared<const Diagram>(f->index_ptr(), std::move(objs), std::move(arrows), false);
    return r;
}

std::string reedy_error(const ReedyReplacement& r)
{
    const RelPoset& idx = r.source->index();
    for (ElementId u = 0; u < r.eta.size(); ++u) {
        const QuasiIsoReport q = quasi_iso_report(r.eta[u]);
        if (!q.ok)
            return "eta at " + idx.label(u) + " is not a quasi-isomorphism: " + q.describe();
        if (!r.matching_maps[u].degreewise_surjective())
            return "matching map at " + idx.label(u) + " is not surjective";
        if (!same_components(r.retractions[u].after(r.eta[u]), ChainMap::identity(r.source->object(u))))
            return "retraction at " + idx.label(u) + " is not a left inverse of eta";
    }
    return {};
}

Holim holim(const DiagramPtr& f, const InverseStructure& inv)
{
    Holim h;
    h.replacement = reedy_replace(f, inv);
    h.model = std::make_shared<const ChainModel>(f, all_elements(f->index()));
    return h;
}

ChainMap Holim::canonical(ElementId d) const
{
    return model->restriction(*replacement.fibrant.at(d));
}

// ---------------------------------------------------------------- extension

Extension extend_to_kappa(const DiagramPtr& f, const InverseStructure& inv, RelPosetPtr marked_cone)
{
    Extension e;
    e.replacement = reedy_replace(f, inv);
    e.limit = std::make_shared<const ChainModel>(f, all_elements(f->index()));
    e.cone = kappa(f->index().poset());
    const KappaPoset& kp = e.cone;
    if (!marked_cone)
        marked_cone = std::make_shared<const RelPoset>(RelPoset::minimal(kp.poset));
    if (marked_cone->size() != kp.poset.size())
        throw std::invalid_argument("extend_to_kappa: marked cone has the wrong size");
    for (ElementId x = 0; x < kp.poset.size(); ++x)
        for (ElementId y = 0; y < kp.poset.size(); ++y)
            if (marked_cone->leq(x, y) != kp.poset.leq(x, y))
                throw std::invalid_argument("extend_to_kappa: marked cone has a different order");

    const auto& fib = e.replacement.fibrant;
    std::vector<ComplexPtr> objs;
    for (ElementId x = 0; x < kp.poset.size(); ++x) {
        if (kp.is_zero(x))
            objs.push_back(f->object(kp.base_of(x)));
        else if (kp.is_one(x))
            objs.push_back(fib[kp.base_of(x)]->complex());
        else
            objs.push_back(e.limit->complex());
    }
    std::map<ElementPair, ChainMap> arrows;
    for (ElementId x = 0; x < kp.poset.size(); ++x)
        for (ElementId y : kp.poset.upper_covers(x)) {
            const ElementId bx = kp.base_of(x), by = kp.base_of(y);
            if (kp.is_zero(x) && kp.is_zero(y))
                arrows.emplace(ElementPair{x, y}, f->arrow(bx, by));
            else if (kp.is_one(x) && kp.is_one(y))
                arrows.emplace(ElementPair{x, y}, fib[bx]->restriction(*fib[by]));
            else if (kp.is_zero(x) && kp.is_one(y))
                arrows.emplace(ElementPair{x, y}, fib[by]->coaugmentation(bx));
            else if (x == kp.apex() && kp.is_one(y))
                arrows.emplace(ElementPair{x, y}, e.limit->restriction(*fib[by]));
            else
                throw std::logic_error("extend_to_kappa: unexpected cover in the cone");
        }
    e.g = std::make_shared<const Diagram>(marked_cone, std::move(objs), std::move(arrows), false);
    return e;
}

} // namespace relcat
