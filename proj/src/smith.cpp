#include <algorithm>
#include <stdexcept>
#include <type_traits>

#include "relcat/homology.hpp"

namespace relcat {

IntMatrix IntMatrix::identity(std::size_t n)
{
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        m.at(i, i) = 1;
    return m;
}

IntMatrix IntMatrix::from_rows(const std::vector<std::vector<long>>& rows)
{
    IntMatrix m(rows.size(), rows.empty() ? 0 : rows[0].size());
    for (std::size_t i = 0; i < m.rows; ++i) {
        if (rows[i].size() != m.cols)
            throw std::invalid_argument("IntMatrix: ragged rows");
        for (std::size_t j = 0; j < m.cols; ++j)
            m.at(i, j) = rows[i][j];
    }
    return m;
}

IntMatrix IntMatrix::operator*(const IntMatrix& o) const
{
    if (cols != o.rows)
        throw std::invalid_argument("IntMatrix: shape mismatch");
    IntMatrix r(rows, o.cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t k = 0; k < cols; ++k) {
            if (sgn(at(i, k)) == 0)
                continue;
            for (std::size_t j = 0; j < o.cols; ++j)
                r.at(i, j) += at(i, k) * o.at(k, j);
        }
    return r;
}

namespace {

struct Smith {
    IntMatrix d, u, v;
    bool track;

    void swap_rows(std::size_t a, std::size_t b)
    {
        if (a == b)
            return;
        for (std::size_t j = 0; j < d.cols; ++j)
            std::swap(d.at(a, j), d.at(b, j));
        if (track)
            for (std::size_t j = 0; j < u.cols; ++j)
                std::swap(u.at(a, j), u.at(b, j));
    }
    void swap_cols(std::size_t a, std::size_t b)
    {
        if (a == b)
            return;
        for (std::size_t i = 0; i < d.rows; ++i)
            std::swap(d.at(i, a), d.at(i, b));
        if (track)
            for (std::size_t i = 0; i < v.rows; ++i)
                std::swap(v.at(i, a), v.at(i, b));
    }
    // row a += q * row b
    void add_row(std::size_t a, std::size_t b, const mpz_class& q)
    {
        for (std::size_t j = 0; j < d.cols; ++j)
            if (sgn(d.at(b, j)) != 0)
                d.at(a, j) += q * d.at(b, j);
        if (track)
            for (std::size_t j = 0; j < u.cols; ++j)
                if (sgn(u.at(b, j)) != 0)
                    u.at(a, j) += q * u.at(b, j);
    }
    // col a += q * col b
    void add_col(std::size_t a, std::size_t b, const mpz_class& q)
    {
        for (std::size_t i = 0; i < d.rows; ++i)
            if (sgn(d.at(i, b)) != 0)
                d.at(i, a) += q * d.at(i, b);
        if (track)
            for (std::size_t i = 0; i < v.rows; ++i)
                if (sgn(v.at(i, b)) != 0)
                    v.at(i, a) += q * v.at(i, b);
    }
    void negate_row(std::size_t a)
    {
        for (std::size_t j = 0; j < d.cols; ++j)
            d.at(a, j) = -d.at(a, j);
        if (track)
            for (std::size_t j = 0; j < u.cols; ++j)
                u.at(a, j) = -u.at(a, j);
    }

    // Moves the smallest nonzero entry of the trailing block to (t, t).
    bool bring_min(std::size_t t)
    {
        bool found = false;
        std::size_t bi = 0, bj = 0;
        mpz_class best;
        for (std::size_t i = t; i < d.rows; ++i)
            for (std::size_t j = t; j < d.cols; ++j)
                if (sgn(d.at(i, j)) != 0 && (!found || abs(d.at(i, j)) < best)) {
                    best = abs(d.at(i, j));
                    bi = i;
                    bj = j;
                    found = true;
                }
        if (!found)
            return false;
        swap_rows(t, bi);
        swap_cols(t, bj);
        return true;
    }

    void run()
    {
        const std::size_t lim = std::min(d.rows, d.cols);
        for (std::size_t t = 0; t < lim; ++t) {
            if (!bring_min(t))
                break;
            for (;;) {
                bool dirty = false;
                for (std::size_t i = t + 1; i < d.rows; ++i) {
                    if (sgn(d.at(i, t)) == 0)
                        continue;
                    mpz_class q;
                    mpz_fdiv_q(q.get_mpz_t(), d.at(i, t).get_mpz_t(), d.at(t, t).get_mpz_t());
                    add_row(i, t, -q);
                    if (sgn(d.at(i, t)) != 0)
                        dirty = true;
                }
                for (std::size_t j = t + 1; j < d.cols; ++j) {
                    if (sgn(d.at(t, j)) == 0)
                        continue;
                    mpz_class q;
                    mpz_fdiv_q(q.get_mpz_t(), d.at(t, j).get_mpz_t(), d.at(t, t).get_mpz_t());
                    add_col(j, t, -q);
                    if (sgn(d.at(t, j)) != 0)
                        dirty = true;
                }
                if (dirty) {
                    bring_min(t);
                    continue;
                }
                // divisibility of the trailing block
                bool fixed = false;
                for (std::size_t i = t + 1; i < d.rows && !fixed; ++i)
                    for (std::size_t j = t + 1; j < d.cols; ++j)
                        if (sgn(d.at(i, j)) != 0 && !mpz_divisible_p(d.at(i, j).get_mpz_t(), d.at(t, t).get_mpz_t())) {
                            add_row(t, i, 1);
                            fixed = true;
                            break;
                        }
                if (!fixed)
                    break;
                bring_min(t);
            }
            if (sgn(d.at(t, t)) < 0)
                negate_row(t);
        }
    }
};

} // namespace

SmithResult smith_normal_form(const IntMatrix& m)
{
    Smith s{m, IntMatrix::identity(m.rows), IntMatrix::identity(m.cols), true};
    s.run();
    SmithResult r;
    for (std::size_t t = 0; t < std::min(m.rows, m.cols); ++t) {
        if (sgn(s.d.at(t, t)) == 0)
            break;
        r.diagonal.push_back(s.d.at(t, t));
    }
    r.rank = r.diagonal.size();
    r.d = std::move(s.d);
    r.u = std::move(s.u);
    r.v = std::move(s.v);
    return r;
}

// ---------------------------------------------------------------- sparse

namespace {

struct Overflow {};

inline std::int64_t checked_sub_mul(std::int64_t a, std::int64_t q, std::int64_t b)
{
    std::int64_t prod, out;
    if (__builtin_mul_overflow(q, b, &prod) || __builtin_sub_overflow(a, prod, &out))
        throw Overflow{};
    return out;
}

inline mpz_class checked_sub_mul(const mpz_class& a, const mpz_class& q, const mpz_class& b)
{
    return a - q * b;
}

inline bool is_unit(std::int64_t x) { return x == 1 || x == -1; }
inline bool is_unit(const mpz_class& x) { return x == 1 || x == -1; }
inline bool is_zero(std::int64_t x) { return x == 0; }
inline bool is_zero(const mpz_class& x) { return sgn(x) == 0; }

template <typename Int>
InvariantFactors eliminate(const SparseIntMatrix& m)
{
    using Row = std::vector<std::pair<std::uint32_t, Int>>;
    // Rows of the transpose: one per column of m.
    std::vector<Row> rows(m.cols);
    std::vector<std::vector<std::uint32_t>> col_rows(m.rows);
    for (std::size_t c = 0; c < m.cols; ++c) {
        for (auto [r, v] : m.columns[c])
            if (v != 0)
                rows[c].emplace_back(r, Int(v));
        std::sort(rows[c].begin(), rows[c].end(), [](const auto& a, const auto& b) { return a.first < b.first; });
        for (auto& [r, v] : rows[c])
            col_rows[r].push_back(static_cast<std::uint32_t>(c));
    }
    std::vector<char> alive(m.cols, 1);
    std::vector<char> skipped(m.rows, 0);
    InvariantFactors out;

    auto entry = [&](const Row& row, std::uint32_t col) -> const Int* {
        auto it = std::lower_bound(row.begin(), row.end(), col,
                                   [](const auto& e, std::uint32_t c) { return e.first < c; });
        if (it == row.end() || it->first != col)
            return nullptr;
        return &it->second;
    };

    Row scratch;
    for (std::uint32_t col = 0; col < m.rows; ++col) {
        // live rows touching col, deduplicated
        std::vector<std::uint32_t> cand;
        for (std::uint32_t r : col_rows[col])
            if (alive[r] && entry(rows[r], col))
                cand.push_back(r);
        std::sort(cand.begin(), cand.end());
        cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
        col_rows[col].clear();
        if (cand.empty())
            continue;
        std::uint32_t piv = 0;
        bool have = false;
        for (std::uint32_t r : cand)
            if (is_unit(*entry(rows[r], col)) && (!have || rows[r].size() < rows[piv].size())) {
                piv = r;
                have = true;
            }
        if (!have) {
            skipped[col] = 1;
            col_rows[col] = cand;
            continue;
        }
        const Row& prow = rows[piv];
        const Int pval = *entry(prow, col);
        for (std::uint32_t r : cand) {
            if (r == piv)
                continue;
            Row& row = rows[r];
            // q = row[col] / pval, exact since pval is a unit
            const Int q = *entry(row, col) * pval;
            scratch.clear();
            std::size_t a = 0, b = 0;
            while (a < row.size() || b < prow.size()) {
                if (b == prow.size() || (a < row.size() && row[a].first < prow[b].first)) {
                    scratch.push_back(row[a++]);
                } else if (a == row.size() || prow[b].first < row[a].first) {
                    Int v = checked_sub_mul(Int(0), q, prow[b].second);
                    scratch.emplace_back(prow[b].first, v);
                    col_rows[prow[b].first].push_back(r);
                    ++b;
                } else {
                    Int v = checked_sub_mul(row[a].second, q, prow[b].second);
                    if (!is_zero(v))
                        scratch.emplace_back(row[a].first, v);
                    ++a;
                    ++b;
                }
            }
            row.swap(scratch);
        }
        alive[piv] = 0;
        Row().swap(rows[piv]);
        ++out.rank;
    }

    // What is left lives in the skipped columns only.
    std::vector<std::uint32_t> rest_rows, rest_cols;
    std::vector<long> col_pos(m.rows, -1);
    for (std::uint32_t c = 0; c < m.rows; ++c)
        if (skipped[c]) {
            col_pos[c] = static_cast<long>(rest_cols.size());
            rest_cols.push_back(c);
        }
    for (std::uint32_t r = 0; r < m.cols; ++r)
        if (alive[r] && !rows[r].empty())
            rest_rows.push_back(r);
    if (!rest_rows.empty()) {
        IntMatrix dense(rest_rows.size(), rest_cols.size());
        for (std::size_t i = 0; i < rest_rows.size(); ++i)
            for (auto& [c, v] : rows[rest_rows[i]]) {
                if (col_pos[c] < 0)
                    throw std::logic_error("invariant_factors: residual entry outside skipped columns");
                if constexpr (std::is_same_v<Int, std::int64_t>)
                    dense.at(i, static_cast<std::size_t>(col_pos[c])) = static_cast<long>(v);
                else
                    dense.at(i, static_cast<std::size_t>(col_pos[c])) = v;
            }
        Smith s{dense, {}, {}, false};
        s.run();
        for (std::size_t t = 0; t < std::min(dense.rows, dense.cols); ++t) {
            const mpz_class& x = s.d.at(t, t);
            if (sgn(x) == 0)
                break;
            ++out.rank;
            if (x != 1)
                out.nontrivial.push_back(x);
        }
    }
    return out;
}

} // namespace

InvariantFactors invariant_factors(const SparseIntMatrix& m)
{
    try {
        return eliminate<std::int64_t>(m);
    } catch (const Overflow&) {
        return eliminate<mpz_class>(m);
    }
}

} // namespace relcat
