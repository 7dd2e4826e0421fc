#include "relcat/chain_complex.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace relcat {

namespace {

void need(bool ok, const std::string& what)
{
    if (!ok)
        throw std::invalid_argument(what);
}

bool same_complex(const ComplexPtr& a, const ComplexPtr& b)
{
    return a == b || *a == *b;
}

// Ranks of d(k) for k = lo..hi+1, certified modulo P when they account for
// every dimension, otherwise exact.
std::vector<std::size_t> boundary_ranks(const ChainComplexQ& c, bool* certified_acyclic)
{
    const int lo = c.lo(), hi = c.hi();
    std::vector<std::size_t> r(static_cast<std::size_t>(hi - lo + 2), 0);
    bool modular_ok = true;
    try {
        for (int k = lo + 1; k <= hi; ++k)
            r[k - lo] = rank_mod_p(c.d(k));
    } catch (const std::domain_error&) {
        modular_ok = false;
    }
    if (modular_ok) {
        bool all = true;
        for (int k = lo; k <= hi; ++k)
            if (r[k - lo] + r[k - lo + 1] != c.dim(k)) {
                all = false;
                break;
            }
        if (all) {
            if (certified_acyclic)
                *certified_acyclic = true;
            return r;
        }
    }
    if (certified_acyclic)
        *certified_acyclic = false;
    for (int k = lo + 1; k <= hi; ++k)
        r[k - lo] = rank_exact(c.d(k));
    return r;
}

nlohmann::json complex_ref(const ChainComplexQ& c)
{
    nlohmann::json dims = nlohmann::json::array();
    for (int k = c.lo(); k <= c.hi(); ++k)
        dims.push_back(c.dim(k));
    return {{"lo", c.lo()}, {"dims", dims}};
}

} // namespace

// ---------------------------------------------------------------- complexes

ChainComplexQ::ChainComplexQ(int lo, std::vector<std::size_t> dims, std::vector<QMatrix> diffs)
    : lo_(lo), dims_(std::move(dims)), diffs_(std::move(diffs))
{
    const std::size_t expected = dims_.empty() ? 0 : dims_.size() - 1;
    need(diffs_.size() == expected, "ChainComplexQ: one differential per adjacent pair of degrees expected");
    for (std::size_t i = 0; i < diffs_.size(); ++i)
        need(diffs_[i].rows() == dims_[i] && diffs_[i].cols() == dims_[i + 1],
             "ChainComplexQ: differential of degree " + std::to_string(lo_ + i + 1) + " has the wrong shape");
    for (std::size_t i = 0; i + 1 < diffs_.size(); ++i)
        if (!(diffs_[i] * diffs_[i + 1]).is_zero())
            throw std::logic_error("ChainComplexQ: d(" + std::to_string(lo_ + i + 1) + ") d(" +
                                   std::to_string(lo_ + i + 2) + ") is nonzero");
}

std::size_t ChainComplexQ::dim(int k) const
{
    if (k < lo_ || k > hi())
        return 0;
    return dims_[k - lo_];
}

std::size_t ChainComplexQ::total_dim() const
{
    return std::accumulate(dims_.begin(), dims_.end(), std::size_t{0});
}

QMatrix ChainComplexQ::d(int k) const
{
    if (k > lo_ && k <= hi())
        return diffs_[k - lo_ - 1];
    return QMatrix(dim(k - 1), dim(k));
}

std::vector<std::size_t> ChainComplexQ::betti() const
{
    std::vector<std::size_t> out;
    if (dims_.empty())
        return out;
    const auto r = boundary_ranks(*this, nullptr);
    for (int k = lo_; k <= hi(); ++k)
        out.push_back(dim(k) - r[k - lo_] - r[k - lo_ + 1]);
    return out;
}

std::size_t ChainComplexQ::betti(int k) const
{
    if (k < lo_ || k > hi())
        return 0;
    return dim(k) - rank(d(k)) - rank(d(k + 1));
}

bool ChainComplexQ::acyclic() const
{
    if (dims_.empty())
        return true;
    bool certified = false;
    const auto r = boundary_ranks(*this, &certified);
    if (certified)
        return true;
    for (int k = lo_; k <= hi(); ++k)
        if (r[k - lo_] + r[k - lo_ + 1] != dim(k))
            return false;
    return true;
}

ChainComplexQ ChainComplexQ::trimmed() const
{
    int a = lo_, b = hi();
    while (a <= b && dim(a) == 0)
        ++a;
    while (b >= a && dim(b) == 0)
        --b;
    if (a > b)
        return {};
    std::vector<std::size_t> dims;
    std::vector<QMatrix> diffs;
    for (int k = a; k <= b; ++k) {
        dims.push_back(dim(k));
        if (k > a)
            diffs.push_back(d(k));
    }
    return ChainComplexQ(a, std::move(dims), std::move(diffs));
}

bool ChainComplexQ::operator==(const ChainComplexQ& o) const
{
    const ChainComplexQ x = trimmed(), y = o.trimmed();
    return x.lo_ == y.lo_ && x.dims_ == y.dims_ && x.diffs_ == y.diffs_;
}

nlohmann::json ChainComplexQ::to_json() const
{
    nlohmann::json d = nlohmann::json::array();
    for (const auto& m : diffs_)
        d.push_back(m.to_json());
    return {{"lo", lo_}, {"dims", dims_}, {"d", d}};
}

ChainComplexQ ChainComplexQ::from_json(const nlohmann::json& j)
{
    std::vector<QMatrix> diffs;
    for (const auto& m : j.at("d"))
        diffs.push_back(QMatrix::from_json(m));
    return ChainComplexQ(j.at("lo").get<int>(), j.at("dims").get<std::vector<std::size_t>>(), std::move(diffs));
}

ComplexPtr make_complex(ChainComplexQ c)
{
    return std::make_shared<const ChainComplexQ>(std::move(c));
}

std::string betti_summary(const ChainComplexQ& c)
{
    const auto b = c.betti();
    std::ostringstream os;
    bool any = false;
    for (std::size_t i = 0; i < b.size(); ++i) {
        if (b[i] == 0)
            continue;
        if (any)
            os << ' ';
        any = true;
        os << 'b' << c.lo() + static_cast<int>(i) << '=' << b[i];
    }
    return any ? os.str() : "acyclic";
}

bool same_homology(const ChainComplexQ& a, const ChainComplexQ& b)
{
    const auto ba = a.betti(), bb = b.betti();
    const int lo = std::min(a.lo(), b.lo()), hi = std::max(a.hi(), b.hi());
    for (int k = lo; k <= hi; ++k) {
        const std::size_t x = k >= a.lo() && k <= a.hi() ? ba[k - a.lo()] : 0;
        const std::size_t y = k >= b.lo() && k <= b.hi() ? bb[k - b.lo()] : 0;
        if (x != y)
            return false;
    }
    return true;
}

// ---------------------------------------------------------------- maps

ChainMap::ChainMap(ComplexPtr source, ComplexPtr target, std::map<int, QMatrix> components)
    : source_(std::move(source)), target_(std::move(target)), comp_(std::move(components))
{
    drop_zero_components();
    const int lo = std::min(source_->lo(), target_->lo());
    const int hi = std::max(source_->hi(), target_->hi()) + 1;
    for (int k = lo + 1; k <= hi; ++k) {
        if (source_->dim(k) == 0)
            continue;
        if (!(target_->d(k) * at(k) == at(k - 1) * source_->d(k)))
            throw std::logic_error("ChainMap: does not commute with d in degree " + std::to_string(k));
    }
}

ChainMap::ChainMap(ComplexPtr source, ComplexPtr target, std::map<int, QMatrix> components, Trusted)
    : source_(std::move(source)), target_(std::move(target)), comp_(std::move(components))
{
    drop_zero_components();
}

void ChainMap::drop_zero_components()
{
    need(source_ && target_, "ChainMap: null complex");
    for (auto it = comp_.begin(); it != comp_.end();) {
        const int k = it->first;
        need(it->second.rows() == target_->dim(k) && it->second.cols() == source_->dim(k),
             "ChainMap: component in degree " + std::to_string(k) + " has the wrong shape");
        if (it->second.is_zero())
            it = comp_.erase(it);
        else
            ++it;
    }
}

ChainMap ChainMap::identity(ComplexPtr c)
{
    std::map<int, QMatrix> comp;
    for (int k = c->lo(); k <= c->hi(); ++k)
        comp.emplace(k, QMatrix::identity(c->dim(k)));
    return ChainMap(c, c, std::move(comp));
}

ChainMap ChainMap::zero(ComplexPtr source, ComplexPtr target)
{
    return ChainMap(std::move(source), std::move(target), {});
}

QMatrix ChainMap::at(int k) const
{
    auto it = comp_.find(k);
    if (it != comp_.end())
        return it->second;
    return QMatrix(target_->dim(k), source_->dim(k));
}

ChainMap ChainMap::after(const ChainMap& first) const
{
    const ChainComplexQ& mid = first.target();
    const int lo = std::min(mid.lo(), source_->lo()), hi = std::max(mid.hi(), source_->hi());
    for (int k = lo; k <= hi; ++k)
        need(mid.dim(k) == source_->dim(k), "ChainMap: composing maps that do not match");
    std::map<int, QMatrix> comp;
    for (const auto& [k, m] : first.comp_) {
        auto it = comp_.find(k);
        if (it != comp_.end())
            comp.emplace(k, it->second * m);
    }
    return ChainMap(first.source_, target_, std::move(comp), Trusted{});
}

ChainMap ChainMap::operator+(const ChainMap& o) const
{
    std::map<int, QMatrix> comp = comp_;
    for (const auto& [k, m] : o.comp_) {
        auto it = comp.find(k);
        if (it == comp.end())
            comp.emplace(k, m);
        else
            it->second = it->second + m;
    }
    need(same_complex(source_, o.source_) && same_complex(target_, o.target_), "ChainMap: adding maps between different complexes");
    return ChainMap(source_, target_, std::move(comp), Trusted{});
}

ChainMap ChainMap::operator-(const ChainMap& o) const
{
    std::map<int, QMatrix> comp = comp_;
    for (const auto& [k, m] : o.comp_) {
        auto it = comp.find(k);
        if (it == comp.end())
            comp.emplace(k, -m);
        else
            it->second = it->second - m;
    }
    need(same_complex(source_, o.source_) && same_complex(target_, o.target_), "ChainMap: subtracting maps between different complexes");
    return ChainMap(source_, target_, std::move(comp), Trusted{});
}

bool ChainMap::operator==(const ChainMap& o) const
{
    return same_complex(source_, o.source_) && same_complex(target_, o.target_) && comp_ == o.comp_;
}

bool ChainMap::degreewise_surjective() const
{
    for (int k = target_->lo(); k <= target_->hi(); ++k)
        if (target_->dim(k) > 0 && rank(at(k)) != target_->dim(k))
            return false;
    return true;
}

bool ChainMap::degreewise_injective() const
{
    for (int k = source_->lo(); k <= source_->hi(); ++k)
        if (source_->dim(k) > 0 && rank(at(k)) != source_->dim(k))
            return false;
    return true;
}

nlohmann::json ChainMap::to_json() const
{
    nlohmann::json comp = nlohmann::json::object();
    for (const auto& [k, m] : comp_)
        comp[std::to_string(k)] = m.to_json();
    return {{"source", complex_ref(*source_)}, {"target", complex_ref(*target_)}, {"components", comp}};
}

// ---------------------------------------------------------------- constructions

ChainComplexQ cone(const ChainMap& f)
{
    const ChainComplexQ& a = f.source();
    const ChainComplexQ& b = f.target();
    const int lo = std::min(a.lo() + 1, b.lo()), hi = std::max(a.hi() + 1, b.hi());
    std::vector<std::size_t> dims;
    std::vector<QMatrix> diffs;
    for (int k = lo; k <= hi; ++k) {
        dims.push_back(a.dim(k - 1) + b.dim(k));
        if (k == lo)
            continue;
        MatrixBuilder m(a.dim(k - 2) + b.dim(k - 1), a.dim(k - 1) + b.dim(k));
        m.add_block(0, 0, a.d(k - 1), -1);
        m.add_block(a.dim(k - 2), 0, f.at(k - 1));
        m.add_block(a.dim(k - 2), a.dim(k - 1), b.d(k));
        diffs.push_back(m.build());
    }
    return ChainComplexQ(lo, std::move(dims), std::move(diffs));
}

std::string QuasiIsoReport::describe() const
{
    if (ok)
        return "quasi-isomorphism";
    std::ostringstream os;
    os << "cone homology nonzero in degree " << *degree << " (dim " << cone_dim << ", rank in " << rank_in
       << ", rank out " << rank_out << "); homology differs in degree " << *degree - 1;
    return os.str();
}

QuasiIsoReport quasi_iso_report(const ChainMap& f)
{
    const ChainComplexQ c = cone(f);
    QuasiIsoReport rep;
    if (c.total_dim() == 0) {
        rep.ok = true;
        return rep;
    }
    bool certified = false;
    const auto r = boundary_ranks(c, &certified);
    for (int k = c.lo(); k <= c.hi(); ++k) {
        const std::size_t out = r[k - c.lo()], in = r[k - c.lo() + 1];
        if (out + in != c.dim(k)) {
            rep.degree = k;
            rep.cone_dim = c.dim(k);
            rep.rank_in = in;
            rep.rank_out = out;
            return rep;
        }
    }
    rep.ok = true;
    return rep;
}

bool is_quasi_iso(const ChainMap& f)
{
    return quasi_iso_report(f).ok;
}

Factorization factorize(const ChainMap& f)
{
    const ComplexPtr& ap = f.source_ptr();
    const ComplexPtr& cp = f.target_ptr();
    const ChainComplexQ& a = *ap;
    const ChainComplexQ& c = *cp;
    const int lo = std::min(a.lo(), c.lo() - 1), hi = std::max(a.hi(), c.hi());
    auto bdim = [&](int k) { return a.dim(k) + c.dim(k) + c.dim(k + 1); };
    std::vector<std::size_t> dims;
    std::vector<QMatrix> diffs;
    for (int k = lo; k <= hi; ++k) {
        dims.push_back(bdim(k));
        if (k == lo)
            continue;
        MatrixBuilder m(bdim(k - 1), bdim(k));
        const std::size_t r_c = a.dim(k - 1), r_h = a.dim(k - 1) + c.dim(k - 1);
        const std::size_t c_c = a.dim(k), c_h = a.dim(k) + c.dim(k);
        m.add_block(0, 0, a.d(k));
        m.add_block(r_c, c_c, c.d(k));
        m.add_block(r_h, 0, f.at(k));
        m.add_identity(r_h, c_c, c.dim(k), -1);
        m.add_block(r_h, c_h, c.d(k + 1), -1);
        diffs.push_back(m.build());
    }
    auto b = make_complex(ChainComplexQ(lo, std::move(dims), std::move(diffs)));

    std::map<int, QMatrix> s, p, r;
    for (int k = lo; k <= hi; ++k) {
        MatrixBuilder ms(bdim(k), a.dim(k));
        ms.add_identity(0, 0, a.dim(k));
        ms.add_block(a.dim(k), 0, f.at(k));
        s.emplace(k, ms.build());
        MatrixBuilder mp(c.dim(k), bdim(k));
        mp.add_identity(0, a.dim(k), c.dim(k));
        p.emplace(k, mp.build());
        MatrixBuilder mr(a.dim(k), bdim(k));
        mr.add_identity(0, 0, a.dim(k));
        r.emplace(k, mr.build());
    }
    Factorization out;
    out.middle = b;
    out.s = std::make_shared<ChainMap>(ap, b, std::move(s));
    out.p = std::make_shared<ChainMap>(b, cp, std::move(p));
    out.r = std::make_shared<ChainMap>(b, ap, std::move(r));
    return out;
}

PathObject path_object(const ComplexPtr& c)
{
    Factorization f = factorize(ChainMap::identity(c));
    return {f.middle, f.s, f.r, f.p};
}

DirectSum direct_sum(const std::vector<ComplexPtr>& parts)
{
    need(!parts.empty(), "direct_sum: no summands");
    int lo = parts[0]->lo(), hi = parts[0]->hi();
    for (const auto& p : parts) {
        lo = std::min(lo, p->lo());
        hi = std::max(hi, p->hi());
    }
    auto total = [&](int k) {
        std::size_t s = 0;
        for (const auto& p : parts)
            s += p->dim(k);
        return s;
    };
    std::vector<std::size_t> dims;
    std::vector<QMatrix> diffs;
    for (int k = lo; k <= hi; ++k) {
        dims.push_back(total(k));
        if (k == lo)
            continue;
        MatrixBuilder m(total(k - 1), total(k));
        std::size_t r = 0, c = 0;
        for (const auto& p : parts) {
            m.add_block(r, c, p->d(k));
            r += p->dim(k - 1);
            c += p->dim(k);
        }
        diffs.push_back(m.build());
    }
    DirectSum out;
    out.sum = make_complex(ChainComplexQ(lo, std::move(dims), std::move(diffs)));
    std::map<int, std::size_t> offset;
    for (const auto& p : parts) {
        std::map<int, QMatrix> pr, in;
        for (int k = lo; k <= hi; ++k) {
            MatrixBuilder a(p->dim(k), total(k)), b(total(k), p->dim(k));
            a.add_identity(0, offset[k], p->dim(k));
            b.add_identity(offset[k], 0, p->dim(k));
            pr.emplace(k, a.build());
            in.emplace(k, b.build());
            offset[k] += p->dim(k);
        }
        out.projections.emplace_back(out.sum, p, std::move(pr));
        out.inclusions.emplace_back(p, out.sum, std::move(in));
    }
    return out;
}

KernelComplex kernel_complex(const ChainMap& phi)
{
    const ChainComplexQ& x = phi.source();
    KernelComplex out;
    for (int k = x.lo(); k <= x.hi(); ++k)
        out.data.emplace(k, kernel(phi.at(k)));
    std::vector<std::size_t> dims;
    std::vector<QMatrix> diffs;
    for (int k = x.lo(); k <= x.hi(); ++k) {
        dims.push_back(out.data.at(k).free_cols.size());
        if (k == x.lo())
            continue;
        diffs.push_back((x.d(k) * out.data.at(k).basis).select_rows(out.data.at(k - 1).free_cols));
    }
    out.kernel = make_complex(ChainComplexQ(x.lo(), std::move(dims), std::move(diffs)));
    std::map<int, QMatrix> inc;
    for (auto& [k, kd] : out.data)
        inc.emplace(k, kd.basis);
    out.inclusion = std::make_shared<ChainMap>(out.kernel, phi.source_ptr(), std::move(inc));
    return out;
}

ChainMap KernelComplex::lift(const ChainMap& g) const
{
    const ChainComplexQ& x = inclusion->target();
    std::map<int, QMatrix> comp;
    for (int k = x.lo(); k <= x.hi(); ++k) {
        const QMatrix gk = g.at(k);
        if (gk.cols() == 0)
            continue;
        QMatrix l = gk.select_rows(data.at(k).free_cols);
        if (!(data.at(k).basis * l == gk))
            throw std::invalid_argument("KernelComplex::lift: map does not land in the kernel");
        comp.emplace(k, std::move(l));
    }
    return ChainMap(g.source_ptr(), kernel, std::move(comp));
}

Pullback pullback(const ChainMap& f, const ChainMap& p)
{
    need(p.degreewise_surjective(), "pullback: p is not degreewise surjective");
    const DirectSum s = direct_sum({f.source_ptr(), p.source_ptr()});
    const ChainMap phi = f.after(s.projections[0]) - p.after(s.projections[1]);
    const KernelComplex k = kernel_complex(phi);
    Pullback out;
    out.object = k.kernel;
    out.to_a = std::make_shared<ChainMap>(s.projections[0].after(*k.inclusion));
    out.to_b = std::make_shared<ChainMap>(s.projections[1].after(*k.inclusion));
    return out;
}

HomotopyPullback homotopy_pullback(const ChainMap& a, const ChainMap& b)
{
    const ChainComplexQ& x = a.source();
    const ChainComplexQ& y = b.source();
    const ChainComplexQ& c = a.target();
    need(a.target_ptr() == b.target_ptr() || c == b.target(), "homotopy_pullback: maps into different complexes");
    const int lo = std::min({x.lo(), y.lo(), c.lo() - 1}), hi = std::max({x.hi(), y.hi(), c.hi()});
    auto hdim = [&](int k) { return x.dim(k) + y.dim(k) + c.dim(k + 1); };
    std::vector<std::size_t> dims;
    std::vector<QMatrix> diffs;
    for (int k = lo; k <= hi; ++k) {
        dims.push_back(hdim(k));
        if (k == lo)
            continue;
        MatrixBuilder m(hdim(k - 1), hdim(k));
        const std::size_t ry = x.dim(k - 1), rh = x.dim(k - 1) + y.dim(k - 1);
        const std::size_t cy = x.dim(k), ch = x.dim(k) + y.dim(k);
        m.add_block(0, 0, x.d(k));
        m.add_block(ry, cy, y.d(k));
        m.add_block(rh, 0, a.at(k));
        m.add_block(rh, cy, b.at(k), -1);
        m.add_block(rh, ch, c.d(k + 1), -1);
        diffs.push_back(m.build());
    }
    HomotopyPullback out;
    out.object = make_complex(ChainComplexQ(lo, std::move(dims), std::move(diffs)));
    std::map<int, QMatrix> pa, pb;
    for (int k = lo; k <= hi; ++k) {
        MatrixBuilder ma(x.dim(k), hdim(k)), mb(y.dim(k), hdim(k));
        ma.add_identity(0, 0, x.dim(k));
        mb.add_identity(0, x.dim(k), y.dim(k));
        pa.emplace(k, ma.build());
        pb.emplace(k, mb.build());
    }
    out.to_a = std::make_shared<ChainMap>(out.object, a.source_ptr(), std::move(pa));
    out.to_b = std::make_shared<ChainMap>(out.object, b.source_ptr(), std::move(pb));
    return out;
}

Pullback homotopy_pullback_by_pullbacks(const ChainMap& a, const ChainMap& b)
{
    const PathObject path = path_object(a.target_ptr());
    const Pullback first = pullback(a, *path.ev0);
    const ChainMap q = path.ev1->after(*first.to_b);
    const ChainMap bb(b.source_ptr(), path.ev1->target_ptr(), [&] {
        std::map<int, QMatrix> m;
        for (int k = b.source().lo(); k <= b.source().hi(); ++k)
            m.emplace(k, b.at(k));
        return m;
    }());
    const Pullback second = pullback(bb, q);
    Pullback out;
    out.object = second.object;
    out.to_a = std::make_shared<ChainMap>(first.to_a->after(*second.to_b));
    out.to_b = second.to_a;
    return out;
}

// ---------------------------------------------------------------- random data

nlohmann::json Caps::to_json() const
{
    return {{"min_degree", min_degree}, {"max_degree", max_degree}, {"max_dim", max_dim}};
}

Caps Caps::parse(const std::string& text)
{
    Caps c;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto eq = item.find('=');
        need(eq != std::string::npos, "caps: expected key=value, got '" + item + "'");
        const std::string key = item.substr(0, eq);
        long v = 0;
        try {
            v = std::stol(item.substr(eq + 1));
        } catch (const std::exception&) {
            throw std::invalid_argument("caps: bad number in '" + item + "'");
        }
        if (key == "degree")
            c.max_degree = static_cast<int>(v);
        else if (key == "min-degree" || key == "min_degree")
            c.min_degree = static_cast<int>(v);
        else if (key == "dim")
            c.max_dim = static_cast<std::size_t>(v);
        else
            throw std::invalid_argument("caps: unknown key '" + key + "'");
    }
    need(c.min_degree <= c.max_degree && c.max_dim >= 1, "caps: empty range");
    return c;
}

long random_int(Rng& rng, long lo, long hi)
{
    return std::uniform_int_distribution<long>(lo, hi)(rng);
}

namespace {

// Random unimodular matrix with its inverse, as a product of elementary
// row operations.
std::pair<QMatrix, QMatrix> unimodular_pair(Rng& rng, std::size_t n)
{
    std::vector<std::vector<long>> m(n, std::vector<long>(n, 0)), inv = m;
    for (std::size_t i = 0; i < n; ++i)
        m[i][i] = inv[i][i] = 1;
    if (n == 0)
        return {QMatrix(0, 0), QMatrix(0, 0)};
    const int steps = static_cast<int>(2 * n);
    for (int s = 0; s < steps; ++s) {
        const auto i = static_cast<std::size_t>(random_int(rng, 0, static_cast<long>(n) - 1));
        const auto j = static_cast<std::size_t>(random_int(rng, 0, static_cast<long>(n) - 1));
        const int kind = static_cast<int>(random_int(rng, 0, 3));
        if (kind == 0) {
            // swap rows of m, swap columns of inv
            std::swap(m[i], m[j]);
            for (auto& row : inv)
                std::swap(row[i], row[j]);
        } else if (kind == 1) {
            for (auto& x : m[i])
                x = -x;
            for (auto& row : inv)
                row[i] = -row[i];
        } else if (i != j) {
            // row i += q row j; inv column j -= q inv column i
            const long q = random_int(rng, 0, 1) ? 1 : -1;
            for (std::size_t c = 0; c < n; ++c)
                m[i][c] += q * m[j][c];
            for (auto& row : inv)
                row[j] -= q * row[i];
        }
    }
    return {QMatrix::from_rows(m), QMatrix::from_rows(inv)};
}

} // namespace

QMatrix random_unimodular(Rng& rng, std::size_t n)
{
    return unimodular_pair(rng, n).first;
}

ChainComplexQ standard_complex(int lo, const std::vector<std::size_t>& betti,
                               const std::vector<std::pair<int, std::size_t>>& disks)
{
    int hi = lo + static_cast<int>(betti.size()) - 1;
    int low = lo;
    for (const auto& [k, cnt] : disks) {
        if (cnt == 0)
            continue;
        hi = std::max(hi, k);
        low = std::min(low, k - 1);
    }
    if (hi < low)
        return {};
    // per degree: sphere generators first, then disk tops, then disk bottoms
    std::vector<std::size_t> spheres(hi - low + 1, 0), tops(hi - low + 1, 0), bottoms(hi - low + 1, 0);
    for (std::size_t i = 0; i < betti.size(); ++i)
        spheres[lo + static_cast<int>(i) - low] += betti[i];
    for (const auto& [k, cnt] : disks) {
        tops[k - low] += cnt;
        bottoms[k - 1 - low] += cnt;
    }
    std::vector<std::size_t> dims;
    std::vector<QMatrix> diffs;
    for (int k = low; k <= hi; ++k) {
        const std::size_t i = k - low;
        dims.push_back(spheres[i] + tops[i] + bottoms[i]);
        if (k == low)
            continue;
        MatrixBuilder m(dims[i - 1], dims[i]);
        m.add_identity(spheres[i - 1] + tops[i - 1], spheres[i], tops[i]);
        diffs.push_back(m.build());
    }
    return ChainComplexQ(low, std::move(dims), std::move(diffs));
}

BasisChange random_basis_change(Rng& rng, const ComplexPtr& c)
{
    std::map<int, std::pair<QMatrix, QMatrix>> p;
    for (int k = c->lo(); k <= c->hi(); ++k)
        p.emplace(k, unimodular_pair(rng, c->dim(k)));
    std::vector<std::size_t> dims;
    std::vector<QMatrix> diffs;
    for (int k = c->lo(); k <= c->hi(); ++k) {
        dims.push_back(c->dim(k));
        if (k > c->lo())
            diffs.push_back(p.at(k - 1).first * c->d(k) * p.at(k).second);
    }
    BasisChange out;
    out.complex = c->total_dim() == 0 ? c : make_complex(ChainComplexQ(c->lo(), std::move(dims), std::move(diffs)));
    std::map<int, QMatrix> fw, bw;
    for (auto& [k, pr] : p) {
        fw.emplace(k, pr.first);
        bw.emplace(k, pr.second);
    }
    out.forward = std::make_shared<ChainMap>(c, out.complex, std::move(fw));
    out.backward = std::make_shared<ChainMap>(out.complex, c, std::move(bw));
    return out;
}

namespace {

ComplexPtr random_standard(Rng& rng, const Caps& caps, bool with_spheres)
{
    const int lo = caps.min_degree, hi = caps.max_degree;
    std::vector<std::size_t> dims(hi - lo + 1, 0), betti(hi - lo + 1, 0);
    std::vector<std::pair<int, std::size_t>> disks;
    if (with_spheres)
        for (int k = lo; k <= hi; ++k) {
            betti[k - lo] = static_cast<std::size_t>(std::min<long>(random_int(rng, 0, 2), static_cast<long>(caps.max_dim)));
            dims[k - lo] += betti[k - lo];
        }
    for (int k = lo + 1; k <= hi; ++k) {
        const std::size_t room = caps.max_dim - std::max(dims[k - lo], dims[k - 1 - lo]);
        const auto cnt = static_cast<std::size_t>(random_int(rng, 0, static_cast<long>(std::min<std::size_t>(room, 2))));
        if (cnt == 0)
            continue;
        disks.emplace_back(k, cnt);
        dims[k - lo] += cnt;
        dims[k - 1 - lo] += cnt;
    }
    return make_complex(standard_complex(lo, betti, disks));
}

} // namespace

ComplexPtr random_complex(Rng& rng, const Caps& caps)
{
    return random_basis_change(rng, random_standard(rng, caps, true)).complex;
}

ComplexPtr random_acyclic(Rng& rng, const Caps& caps)
{
    return random_basis_change(rng, random_standard(rng, caps, false)).complex;
}

ChainMap random_chain_map(Rng& rng, const ComplexPtr& a, const ComplexPtr& b)
{
    const int lo = std::max(a->lo(), b->lo()), hi = std::min(a->hi(), b->hi());
    // unknowns: entries of f(k), row-major, for k = lo..hi
    std::map<int, std::size_t> off;
    std::size_t nvar = 0;
    for (int k = lo; k <= hi; ++k) {
        off[k] = nvar;
        nvar += a->dim(k) * b->dim(k);
    }
    if (nvar == 0)
        return ChainMap::zero(a, b);
    auto var = [&](int k, std::size_t i, std::size_t j) {
        return static_cast<std::uint32_t>(off.at(k) + i * a->dim(k) + j);
    };
    // d_b(k) f(k) - f(k-1) d_a(k) = 0, entry (r, c)
    std::vector<QMatrix::Row> rows;
    for (int k = lo; k <= hi + 1; ++k) {
        const QMatrix db = b->d(k), da = a->d(k);
        for (std::size_t r = 0; r < b->dim(k - 1); ++r)
            for (std::size_t c = 0; c < a->dim(k); ++c) {
                QMatrix::Row row;
                if (k <= hi && k >= lo)
                    for (std::size_t i = 0; i < b->dim(k); ++i) {
                        Rational v = db.at(r, i);
                        if (sgn(v) != 0)
                            row.emplace_back(var(k, i, c), v);
                    }
                if (k - 1 >= lo && k - 1 <= hi)
                    for (std::size_t j = 0; j < a->dim(k - 1); ++j) {
                        Rational v = da.at(j, c);
                        if (sgn(v) != 0)
                            row.emplace_back(var(k - 1, r, j), -v);
                    }
                if (!row.empty())
                    rows.push_back(std::move(row));
            }
    }
    const std::size_t nrows = rows.size();
    const Kernel ker = kernel(QMatrix::from_rows(nrows, nvar, std::move(rows)));
    std::vector<Rational> coeff(ker.free_cols.size());
    for (auto& x : coeff)
        x = random_int(rng, -2, 2);
    std::vector<Rational> v = ker.basis.apply(coeff);
    mpz_class den = 1;
    for (const auto& x : v)
        mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), x.get_den().get_mpz_t());
    std::map<int, QMatrix> comp;
    for (int k = lo; k <= hi; ++k) {
        std::vector<QMatrix::Row> data(b->dim(k));
        for (std::size_t i = 0; i < b->dim(k); ++i)
            for (std::size_t j = 0; j < a->dim(k); ++j) {
                const Rational x = v[var(k, i, j)] * den;
                if (sgn(x) != 0)
                    data[i].emplace_back(static_cast<std::uint32_t>(j), x);
            }
        comp.emplace(k, QMatrix::from_rows(b->dim(k), a->dim(k), std::move(data)));
    }
    return ChainMap(a, b, std::move(comp));
}

} // namespace relcat
