#include "relcat/linalg.hpp"

#include <algorithm>
#include <stdexcept>

namespace relcat {

namespace {

void check_shape(bool ok, const char* what)
{
    if (!ok)
        throw std::invalid_argument(std::string("QMatrix: shape mismatch in ") + what);
}

template <typename F>
using SparseRow = std::vector<std::pair<std::uint32_t, F>>;

inline bool zero_of(const Rational& x) { return sgn(x) == 0; }
inline bool zero_of(const ModP& x) { return x.is_zero(); }
inline Rational inverse(const Rational& x) { return 1 / x; }
inline ModP inverse(const ModP& x) { return x.inverse(); }

// out = a + s * b over sorted sparse rows
template <typename F>
void axpy(SparseRow<F>& out, const SparseRow<F>& a, const F& s, const SparseRow<F>& b)
{
    out.clear();
    out.reserve(a.size() + b.size());
    std::size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
        if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
            out.push_back(a[i++]);
        } else if (i == a.size() || b[j].first < a[i].first) {
            out.emplace_back(b[j].first, s * b[j].second);
            ++j;
        } else {
            F v = a[i].second + s * b[j].second;
            if (!zero_of(v))
                out.emplace_back(a[i].first, std::move(v));
            ++i;
            ++j;
        }
    }
}

template <typename F>
const F* find_entry(const SparseRow<F>& row, std::uint32_t col)
{
    auto it = std::lower_bound(row.begin(), row.end(), col,
                               [](const auto& e, std::uint32_t c) { return e.first < c; });
    if (it == row.end() || it->first != col)
        return nullptr;
    return &it->second;
}

// Column by column; the pivot is the shortest live row touching the column.
template <typename F>
std::size_t sparse_rank(std::vector<SparseRow<F>> rows, std::size_t ncols)
{
    std::vector<std::vector<std::uint32_t>> col_rows(ncols);
    for (std::uint32_t r = 0; r < rows.size(); ++r)
        for (auto& e : rows[r])
            col_rows[e.first].push_back(r);
    std::vector<char> alive(rows.size(), 1);
    std::size_t rank = 0;
    SparseRow<F> scratch;
    std::vector<std::uint32_t> cand;
    for (std::uint32_t c = 0; c < ncols; ++c) {
        cand.clear();
        for (std::uint32_t r : col_rows[c])
            if (alive[r] && find_entry(rows[r], c))
                cand.push_back(r);
        std::vector<std::uint32_t>().swap(col_rows[c]);
        if (cand.empty())
            continue;
        std::sort(cand.begin(), cand.end());
        cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
        std::uint32_t piv = cand[0];
        for (std::uint32_t r : cand)
            if (rows[r].size() < rows[piv].size())
                piv = r;
        const F pinv = inverse(*find_entry(rows[piv], c));
        for (std::uint32_t r : cand) {
            if (r == piv)
                continue;
            const F q = -(*find_entry(rows[r], c) * pinv);
            axpy(scratch, rows[r], q, rows[piv]);
            // new columns of r need to know about it
            for (auto& e : scratch)
                if (!find_entry(rows[r], e.first))
                    col_rows[e.first].push_back(r);
            rows[r].swap(scratch);
        }
        alive[piv] = 0;
        SparseRow<F>().swap(rows[piv]);
        ++rank;
    }
    return rank;
}

nlohmann::json mpz_json(const mpz_class& z)
{
    if (z.fits_slong_p())
        return z.get_si();
    return z.get_str();
}

mpz_class json_mpz(const nlohmann::json& j)
{
    if (j.is_string())
        return mpz_class(j.get<std::string>());
    return mpz_class(j.get<long>());
}

} // namespace

// ---------------------------------------------------------------- QMatrix

QMatrix QMatrix::identity(std::size_t n, const Rational& scale)
{
    QMatrix m(n, n);
    if (zero_of(scale))
        return m;
    for (std::size_t i = 0; i < n; ++i)
        m.data_[i].emplace_back(static_cast<std::uint32_t>(i), scale);
    return m;
}

QMatrix QMatrix::from_rows(const std::vector<std::vector<long>>& rows)
{
    const std::size_t c = rows.empty() ? 0 : rows[0].size();
    QMatrix m(rows.size(), c);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        check_shape(rows[i].size() == c, "from_rows");
        for (std::size_t j = 0; j < c; ++j)
            if (rows[i][j] != 0)
                m.data_[i].emplace_back(static_cast<std::uint32_t>(j), Rational(rows[i][j]));
    }
    return m;
}

QMatrix QMatrix::from_rows(std::size_t rows, std::size_t cols, std::vector<Row> data)
{
    check_shape(data.size() == rows, "from_rows");
    QMatrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        Row& r = data[i];
        std::sort(r.begin(), r.end(), [](const Entry& a, const Entry& b) { return a.first < b.first; });
        Row clean;
        for (auto& e : r) {
            check_shape(e.first < cols, "from_rows");
            if (!clean.empty() && clean.back().first == e.first)
                clean.back().second += e.second;
            else
                clean.push_back(std::move(e));
        }
        std::erase_if(clean, [](const Entry& e) { return zero_of(e.second); });
        m.data_[i] = std::move(clean);
    }
    return m;
}

std::size_t QMatrix::nnz() const
{
    std::size_t n = 0;
    for (const auto& r : data_)
        n += r.size();
    return n;
}

Rational QMatrix::at(std::size_t i, std::size_t j) const
{
    const Rational* p = find_entry(data_.at(i), static_cast<std::uint32_t>(j));
    return p ? *p : Rational(0);
}

void QMatrix::set(std::size_t i, std::size_t j, const Rational& v)
{
    check_shape(i < rows_ && j < cols_, "set");
    Row& r = data_[i];
    auto it = std::lower_bound(r.begin(), r.end(), static_cast<std::uint32_t>(j),
                               [](const Entry& e, std::uint32_t c) { return e.first < c; });
    const bool here = it != r.end() && it->first == j;
    if (zero_of(v)) {
        if (here)
            r.erase(it);
    } else if (here) {
        it->second = v;
    } else {
        r.insert(it, Entry(static_cast<std::uint32_t>(j), v));
    }
}

QMatrix QMatrix::operator*(const QMatrix& o) const
{
    check_shape(cols_ == o.rows_, "product");
    QMatrix out(rows_, o.cols_);
    std::vector<Rational> acc(o.cols_);
    std::vector<char> touched(o.cols_, 0);
    std::vector<std::uint32_t> list;
    for (std::size_t i = 0; i < rows_; ++i) {
        list.clear();
        for (const auto& [k, a] : data_[i])
            for (const auto& [j, b] : o.data_[k]) {
                if (!touched[j]) {
                    touched[j] = 1;
                    list.push_back(j);
                    acc[j] = a * b;
                } else {
                    acc[j] += a * b;
                }
            }
        std::sort(list.begin(), list.end());
        for (std::uint32_t j : list) {
            if (!zero_of(acc[j]))
                out.data_[i].emplace_back(j, acc[j]);
            touched[j] = 0;
        }
    }
    return out;
}

QMatrix QMatrix::operator+(const QMatrix& o) const
{
    check_shape(rows_ == o.rows_ && cols_ == o.cols_, "sum");
    QMatrix out(rows_, cols_);
    for (std::size_t i = 0; i < rows_; ++i)
        axpy(out.data_[i], data_[i], Rational(1), o.data_[i]);
    return out;
}

QMatrix QMatrix::operator-(const QMatrix& o) const
{
    check_shape(rows_ == o.rows_ && cols_ == o.cols_, "difference");
    QMatrix out(rows_, cols_);
    for (std::size_t i = 0; i < rows_; ++i)
        axpy(out.data_[i], data_[i], Rational(-1), o.data_[i]);
    return out;
}

QMatrix QMatrix::operator-() const { return scaled(-1); }

QMatrix QMatrix::scaled(const Rational& s) const
{
    QMatrix out(rows_, cols_);
    if (zero_of(s))
        return out;
    for (std::size_t i = 0; i < rows_; ++i) {
        out.data_[i] = data_[i];
        for (auto& e : out.data_[i])
            e.second *= s;
    }
    return out;
}

QMatrix QMatrix::transpose() const
{
    QMatrix out(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (const auto& [j, v] : data_[i])
            out.data_[j].emplace_back(static_cast<std::uint32_t>(i), v);
    return out;
}

bool QMatrix::operator==(const QMatrix& o) const
{
    return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
}

bool QMatrix::is_zero() const
{
    return std::all_of(data_.begin(), data_.end(), [](const Row& r) { return r.empty(); });
}

QMatrix QMatrix::select_rows(const std::vector<std::uint32_t>& ids) const
{
    QMatrix out(ids.size(), cols_);
    for (std::size_t i = 0; i < ids.size(); ++i)
        out.data_[i] = data_.at(ids[i]);
    return out;
}

QMatrix QMatrix::select_cols(const std::vector<std::uint32_t>& ids) const
{
    std::vector<long> pos(cols_, -1);
    for (std::size_t j = 0; j < ids.size(); ++j) {
        check_shape(ids[j] < cols_ && pos[ids[j]] < 0, "select_cols");
        pos[ids[j]] = static_cast<long>(j);
    }
    QMatrix out(rows_, ids.size());
    for (std::size_t i = 0; i < rows_; ++i) {
        for (const auto& [j, v] : data_[i])
            if (pos[j] >= 0)
                out.data_[i].emplace_back(static_cast<std::uint32_t>(pos[j]), v);
        std::sort(out.data_[i].begin(), out.data_[i].end(),
                  [](const Entry& a, const Entry& b) { return a.first < b.first; });
    }
    return out;
}

std::vector<Rational> QMatrix::apply(const std::vector<Rational>& v) const
{
    check_shape(v.size() == cols_, "apply");
    std::vector<Rational> out(rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (const auto& [j, a] : data_[i])
            out[i] += a * v[j];
    return out;
}

nlohmann::json QMatrix::to_json() const
{
    nlohmann::json entries = nlohmann::json::array();
    for (std::size_t i = 0; i < rows_; ++i)
        for (const auto& [j, v] : data_[i])
            entries.push_back({i, j, mpz_json(v.get_num()), mpz_json(v.get_den())});
    return {{"rows", rows_}, {"cols", cols_}, {"entries", entries}};
}

QMatrix QMatrix::from_json(const nlohmann::json& j)
{
    const std::size_t r = j.at("rows").get<std::size_t>();
    const std::size_t c = j.at("cols").get<std::size_t>();
    std::vector<Row> data(r);
    for (const auto& e : j.at("entries")) {
        const std::size_t i = e.at(0).get<std::size_t>();
        check_shape(i < r, "from_json");
        Rational v(json_mpz(e.at(2)), json_mpz(e.at(3)));
        v.canonicalize();
        data[i].emplace_back(e.at(1).get<std::uint32_t>(), v);
    }
    return from_rows(r, c, std::move(data));
}

// ---------------------------------------------------------------- builder

void MatrixBuilder::add(std::size_t i, std::size_t j, const Rational& v)
{
    check_shape(i < rows_ && j < cols_, "builder");
    if (!zero_of(v))
        data_[i].emplace_back(static_cast<std::uint32_t>(j), v);
}

void MatrixBuilder::add_block(std::size_t r0, std::size_t c0, const QMatrix& m, const Rational& scale)
{
    check_shape(r0 + m.rows() <= rows_ && c0 + m.cols() <= cols_, "builder block");
    if (zero_of(scale))
        return;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (const auto& [j, v] : m.row(i))
            data_[r0 + i].emplace_back(static_cast<std::uint32_t>(c0 + j), v * scale);
}

void MatrixBuilder::add_identity(std::size_t r0, std::size_t c0, std::size_t n, const Rational& scale)
{
    check_shape(r0 + n <= rows_ && c0 + n <= cols_, "builder identity");
    if (zero_of(scale))
        return;
    for (std::size_t i = 0; i < n; ++i)
        data_[r0 + i].emplace_back(static_cast<std::uint32_t>(c0 + i), scale);
}

QMatrix MatrixBuilder::build()
{
    return QMatrix::from_rows(rows_, cols_, std::move(data_));
}

QMatrix hstack(const QMatrix& a, const QMatrix& b)
{
    check_shape(a.rows() == b.rows(), "hstack");
    MatrixBuilder m(a.rows(), a.cols() + b.cols());
    m.add_block(0, 0, a);
    m.add_block(0, a.cols(), b);
    return m.build();
}

QMatrix vstack(const QMatrix& a, const QMatrix& b)
{
    check_shape(a.cols() == b.cols(), "vstack");
    MatrixBuilder m(a.rows() + b.rows(), a.cols());
    m.add_block(0, 0, a);
    m.add_block(a.rows(), 0, b);
    return m.build();
}

QMatrix block_diag(const QMatrix& a, const QMatrix& b)
{
    MatrixBuilder m(a.rows() + b.rows(), a.cols() + b.cols());
    m.add_block(0, 0, a);
    m.add_block(a.rows(), a.cols(), b);
    return m.build();
}

// ---------------------------------------------------------------- mod p

namespace {

inline std::uint64_t reduce(unsigned __int128 x)
{
    std::uint64_t lo = static_cast<std::uint64_t>(x & ModP::P);
    std::uint64_t hi = static_cast<std::uint64_t>(x >> 61);
    std::uint64_t s = lo + hi;
    if (s >= ModP::P)
        s -= ModP::P;
    return s;
}

ModP mpz_mod(const mpz_class& z)
{
    static const mpz_class p(std::to_string(ModP::P));
    mpz_class r;
    mpz_fdiv_r(r.get_mpz_t(), z.get_mpz_t(), p.get_mpz_t());
    ModP m;
    m.v = r.get_ui();
    return m;
}

} // namespace

ModP ModP::from_signed(long long x)
{
    ModP m;
    const long long r = x % static_cast<long long>(P);
    m.v = static_cast<std::uint64_t>(r < 0 ? r + static_cast<long long>(P) : r);
    return m;
}

ModP ModP::from_rational(const Rational& q)
{
    const ModP den = mpz_mod(q.get_den());
    if (den.is_zero())
        throw std::domain_error("ModP: denominator divisible by the modulus");
    return mpz_mod(q.get_num()) * den.inverse();
}

ModP ModP::operator+(ModP o) const
{
    ModP r;
    r.v = v + o.v;
    if (r.v >= P)
        r.v -= P;
    return r;
}

ModP ModP::operator-(ModP o) const
{
    ModP r;
    r.v = v >= o.v ? v - o.v : v + P - o.v;
    return r;
}

ModP ModP::operator*(ModP o) const
{
    ModP r;
    r.v = reduce(static_cast<unsigned __int128>(v) * o.v);
    return r;
}

ModP ModP::operator-() const
{
    ModP r;
    r.v = v == 0 ? 0 : P - v;
    return r;
}

ModP ModP::inverse() const
{
    if (v == 0)
        throw std::domain_error("ModP: inverse of zero");
    ModP base = *this, result(1);
    std::uint64_t e = P - 2;
    while (e) {
        if (e & 1)
            result = result * base;
        base = base * base;
        e >>= 1;
    }
    return result;
}

std::size_t rank_mod_p(const QMatrix& m)
{
    std::vector<SparseRow<ModP>> rows(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        rows[i].reserve(m.row(i).size());
        for (const auto& [j, v] : m.row(i)) {
            ModP x = v.get_den() == 1 && v.get_num().fits_slong_p() ? ModP::from_signed(v.get_num().get_si())
                                                                    : ModP::from_rational(v);
            if (!x.is_zero())
                rows[i].emplace_back(j, x);
        }
    }
    return sparse_rank(std::move(rows), m.cols());
}

namespace {

struct Overflow {};

inline std::int64_t sub_mul(std::int64_t a, std::int64_t q, std::int64_t b)
{
    std::int64_t prod, out;
    if (__builtin_mul_overflow(q, b, &prod) || __builtin_sub_overflow(a, prod, &out))
        throw Overflow{};
    return out;
}

// Integer elimination on unit pivots only; columns without a unit pivot are
// left for the rational pass. Row operations with integer multipliers keep
// the rational rank.
std::size_t integer_rank(const QMatrix& m)
{
    using Row = SparseRow<std::int64_t>;
    std::vector<Row> rows(m.rows());
    std::vector<std::vector<std::uint32_t>> col_rows(m.cols());
    for (std::uint32_t i = 0; i < m.rows(); ++i)
        for (const auto& [j, v] : m.row(i)) {
            rows[i].emplace_back(j, v.get_num().get_si());
            col_rows[j].push_back(i);
        }
    std::vector<char> alive(rows.size(), 1);
    std::size_t rank = 0;
    Row scratch;
    std::vector<std::uint32_t> cand;
    for (std::uint32_t c = 0; c < m.cols(); ++c) {
        cand.clear();
        for (std::uint32_t r : col_rows[c])
            if (alive[r] && find_entry(rows[r], c))
                cand.push_back(r);
        std::sort(cand.begin(), cand.end());
        cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
        col_rows[c] = cand;
        if (cand.empty())
            continue;
        long piv = -1;
        for (std::uint32_t r : cand) {
            const std::int64_t x = *find_entry(rows[r], c);
            if ((x == 1 || x == -1) && (piv < 0 || rows[r].size() < rows[piv].size()))
                piv = r;
        }
        if (piv < 0)
            continue;
        const Row& prow = rows[piv];
        const std::int64_t pv = *find_entry(prow, c);
        for (std::uint32_t r : cand) {
            if (r == static_cast<std::uint32_t>(piv))
                continue;
            const std::int64_t q = *find_entry(rows[r], c) * pv;
            Row& row = rows[r];
            scratch.clear();
            std::size_t a = 0, b = 0;
            while (a < row.size() || b < prow.size()) {
                if (b == prow.size() || (a < row.size() && row[a].first < prow[b].first)) {
                    scratch.push_back(row[a++]);
                } else if (a == row.size() || prow[b].first < row[a].first) {
                    scratch.emplace_back(prow[b].first, sub_mul(0, q, prow[b].second));
                    col_rows[prow[b].first].push_back(r);
                    ++b;
                } else {
                    const std::int64_t v = sub_mul(row[a].second, q, prow[b].second);
                    if (v != 0)
                        scratch.emplace_back(row[a].first, v);
                    ++a;
                    ++b;
                }
            }
            row.swap(scratch);
        }
        alive[piv] = 0;
        Row().swap(rows[piv]);
        ++rank;
    }
    std::vector<SparseRow<Rational>> rest;
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (!alive[r] || rows[r].empty())
            continue;
        SparseRow<Rational> q;
        q.reserve(rows[r].size());
        for (auto& [j, v] : rows[r])
            q.emplace_back(j, Rational(static_cast<long>(v)));
        rest.push_back(std::move(q));
    }
    if (!rest.empty())
        rank += sparse_rank(std::move(rest), m.cols());
    return rank;
}

bool small_integral(const QMatrix& m)
{
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (const auto& e : m.row(i))
            if (e.second.get_den() != 1 || !e.second.get_num().fits_slong_p())
                return false;
    return true;
}

} // namespace

std::size_t rank_exact(const QMatrix& m)
{
    if (small_integral(m)) {
        try {
            return integer_rank(m);
        } catch (const Overflow&) {
        }
    }
    std::vector<SparseRow<Rational>> rows(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i)
        rows[i] = m.row(i);
    return sparse_rank(std::move(rows), m.cols());
}

std::size_t rank(const QMatrix& m)
{
    const std::size_t full = std::min(m.rows(), m.cols());
    try {
        if (rank_mod_p(m) == full)
            return full;
    } catch (const std::domain_error&) {
    }
    return rank_exact(m);
}

// ---------------------------------------------------------------- kernel

std::vector<Rational> Kernel::coordinates(const std::vector<Rational>& v) const
{
    std::vector<Rational> c(free_cols.size());
    for (std::size_t j = 0; j < free_cols.size(); ++j)
        c[j] = v.at(free_cols[j]);
    return c;
}

Kernel kernel(const QMatrix& m)
{
    // Reduced row echelon form kept incrementally: pivot rows have a 1 in
    // their pivot column and zeros in every other pivot column.
    const std::size_t n = m.cols();
    std::vector<SparseRow<Rational>> piv_rows;
    std::vector<long> piv_of_col(n, -1);
    SparseRow<Rational> scratch;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        SparseRow<Rational> r = m.row(i);
        std::vector<std::pair<long, Rational>> hits;
        for (const auto& [c, v] : r)
            if (piv_of_col[c] >= 0)
                hits.emplace_back(piv_of_col[c], v);
        for (const auto& [p, v] : hits) {
            axpy(scratch, r, Rational(-v), piv_rows[p]);
            r.swap(scratch);
        }
        if (r.empty())
            continue;
        // shortest-looking choice: the first column
        const std::uint32_t pc = r.front().first;
        const Rational inv = 1 / r.front().second;
        for (auto& e : r)
            e.second *= inv;
        for (auto& other : piv_rows) {
            const Rational* x = find_entry(other, pc);
            if (!x)
                continue;
            const Rational f = -*x;
            axpy(scratch, other, f, r);
            other.swap(scratch);
        }
        piv_of_col[pc] = static_cast<long>(piv_rows.size());
        piv_rows.push_back(std::move(r));
    }
    Kernel k;
    for (std::uint32_t c = 0; c < n; ++c)
        if (piv_of_col[c] < 0)
            k.free_cols.push_back(c);
    std::vector<long> free_pos(n, -1);
    for (std::size_t j = 0; j < k.free_cols.size(); ++j)
        free_pos[k.free_cols[j]] = static_cast<long>(j);
    std::vector<QMatrix::Row> rows(n);
    for (std::size_t j = 0; j < k.free_cols.size(); ++j)
        rows[k.free_cols[j]].emplace_back(static_cast<std::uint32_t>(j), Rational(1));
    for (std::uint32_t c = 0; c < n; ++c) {
        if (piv_of_col[c] < 0)
            continue;
        for (const auto& [col, v] : piv_rows[piv_of_col[c]])
            if (col != c)
                rows[c].emplace_back(static_cast<std::uint32_t>(free_pos[col]), Rational(-v));
    }
    k.basis = QMatrix::from_rows(n, k.free_cols.size(), std::move(rows));
    return k;
}

} // namespace relcat
