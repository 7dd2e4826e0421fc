#include "relcat/filtration.hpp"

#include <algorithm>
#include <functional>
#include <random>
#include <set>
#include <stdexcept>

namespace relcat {

bool ProductCell::contains(std::pair<int, int> col) const
{
    return std::find(columns.begin(), columns.end(), col) != columns.end();
}

ProductCell ProductCell::face(int j) const
{
    ProductCell f = *this;
    f.columns.erase(f.columns.begin() + j);
    return f;
}

std::string ProductCell::format() const
{
    std::string top = "[", bottom = "[";
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (i) {
            top += " ";
            bottom += " ";
        }
        top += std::to_string(columns[i].first);
        bottom += std::to_string(columns[i].second);
    }
    return top + "/" + bottom.substr(1) + "]";
}

void validate_cell(const ProductCell& c, int n, int m)
{
    if (c.columns.empty())
        throw std::invalid_argument("product cell: no columns");
    for (std::size_t i = 0; i < c.columns.size(); ++i) {
        auto [a, u] = c.columns[i];
        if (a < 0 || a > n || u < 0 || u > m)
            throw std::invalid_argument("product cell: column out of range in " + c.format());
        if (i > 0) {
            auto [pa, pu] = c.columns[i - 1];
            if (a < pa || u < pu)
                throw std::invalid_argument("product cell: columns not increasing in " + c.format());
            if (a == pa && u == pu)
                throw std::invalid_argument("product cell: repeated column in " + c.format());
        }
    }
}

std::vector<ProductCell> product_cells(int n, int m, int r)
{
    std::vector<ProductCell> out;
    if (r < 0 || r > n + m)
        return out;
    ProductCell cur;
    std::function<void()> extend = [&]() {
        if (cur.dim() == r) {
            out.push_back(cur);
            return;
        }
        auto [pa, pu] = cur.columns.back();
        for (int a = pa; a <= n; ++a)
            for (int u = pu; u <= m; ++u) {
                if (a == pa && u == pu)
                    continue;
                cur.columns.emplace_back(a, u);
                extend();
                cur.columns.pop_back();
            }
    };
    for (int a = 0; a <= n; ++a)
        for (int u = 0; u <= m; ++u) {
            cur.columns = {{a, u}};
            extend();
        }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<ProductCell> all_product_cells(int n, int m)
{
    std::vector<ProductCell> out;
    for (int r = 0; r <= n + m; ++r) {
        auto cells = product_cells(n, m, r);
        out.insert(out.end(), cells.begin(), cells.end());
    }
    return out;
}

bool in_Y0(const ProductCell& c, int n, int m, int k)
{
    std::set<int> as, us;
    for (auto [a, u] : c.columns) {
        as.insert(a);
        us.insert(u);
    }
    std::set<int> full, face;
    for (int a = 0; a <= n; ++a) {
        full.insert(a);
        if (a != k)
            face.insert(a);
    }
    const bool cond_i = as != full && as != face;
    const bool cond_ii = static_cast<int>(us.size()) != m + 1;
    return cond_i || cond_ii;
}

ProductCell reverse_cell(const ProductCell& c, int n, int m)
{
    ProductCell r;
    for (auto it = c.columns.rbegin(); it != c.columns.rend(); ++it)
        r.columns.emplace_back(n - it->first, m - it->second);
    return r;
}

bool edge_marked(const ProductCell& c, int i, int j)
{
    return c.columns[i].second == c.columns[j].second;
}

std::string to_string(HornKind h)
{
    switch (h) {
    case HornKind::Inner:
        return "inner";
    case HornKind::SpecialLeft:
        return "special-left";
    case HornKind::SpecialRight:
        return "special-right";
    case HornKind::Invalid:
        return "invalid";
    }
    return "?";
}

std::string to_string(Side s)
{
    return s == Side::Left ? "left" : "right";
}

namespace {

int column_index(const ProductCell& c, std::pair<int, int> v)
{
    auto it = std::find(c.columns.begin(), c.columns.end(), v);
    return it == c.columns.end() ? -1 : static_cast<int>(it - c.columns.begin());
}

// The cell spanned by c and v, if the columns remain a chain.
std::optional<ProductCell> with_column(const ProductCell& c, std::pair<int, int> v)
{
    if (c.contains(v))
        return c;
    ProductCell out = c;
    auto pos = std::find_if(out.columns.begin(), out.columns.end(), [&](const auto& col) {
        return col.first > v.first || (col.first == v.first && col.second > v.second);
    });
    out.columns.insert(pos, v);
    for (std::size_t i = 1; i < out.columns.size(); ++i)
        if (out.columns[i].first < out.columns[i - 1].first || out.columns[i].second < out.columns[i - 1].second)
            return std::nullopt;
    return out;
}

std::pair<int, int> stage_vertex(Side side, int m, int k, int i)
{
    // Stage i (1-based) adds the column (k, m-i+1) on the left and (k, i-1)
    // on the right.
    return side == Side::Left ? std::make_pair(k, m - i + 1) : std::make_pair(k, i - 1);
}

HornKind classify(int j, int t, Side side)
{
    if (j > 0 && j < t)
        return HornKind::Inner;
    if (side == Side::Left && j == 0)
        return HornKind::SpecialLeft;
    if (side == Side::Right && j == t)
        return HornKind::SpecialRight;
    return HornKind::Invalid;
}

FiltrationReport build_left(int n, int m, int k, std::optional<std::uint64_t> seed)
{
    FiltrationReport rep;
    rep.n = n;
    rep.m = m;
    rep.k = k;
    rep.side = Side::Left;
    rep.shuffle_seed = seed;
    std::mt19937_64 rng(seed.value_or(0));

    auto all = all_product_cells(n, m);
    rep.total_cells = all.size();
    std::set<ProductCell> current;
    for (const auto& c : all)
        if (in_Y0(c, n, m, k))
            current.insert(c);
    rep.y0_cells = current.size();

    for (int i = 1; i <= m + 1; ++i) {
        auto v = stage_vertex(Side::Left, m, k, i);
        for (int t = n; t <= n + m; ++t) {
            FiltrationStage st;
            st.i = i;
            st.t = t;
            st.vertex = v;
            std::vector<ProductCell> fresh;
            for (const auto& y : product_cells(n, m, t))
                if (y.contains(v) && !current.count(y))
                    fresh.push_back(y);
            if (seed)
                std::shuffle(fresh.begin(), fresh.end(), rng);
            for (auto& y : fresh) {
                Attachment a;
                a.missing_index = column_index(y, v);
                a.missing_face = y.face(a.missing_index);
                a.kind = classify(a.missing_index, t, Side::Left);
                a.marked_edge_ok = a.kind == HornKind::Inner ||
                                   (a.kind == HornKind::SpecialLeft && edge_marked(y, 0, 1));
                a.cell = std::move(y);
                current.insert(a.cell);
                current.insert(a.missing_face);
                st.cells.push_back(std::move(a));
            }
            rep.attached += st.cells.size();
            rep.missing_faces += st.cells.size();
            if (!st.cells.empty())
                rep.stages.push_back(std::move(st));
        }
    }
    return rep;
}

FiltrationReport transport_to_right(const FiltrationReport& left, int k)
{
    const int n = left.n, m = left.m;
    FiltrationReport rep = left;
    rep.k = k;
    rep.side = Side::Right;
    for (auto& st : rep.stages) {
        st.vertex = {n - st.vertex.first, m - st.vertex.second};
        for (auto& a : st.cells) {
            a.cell = reverse_cell(a.cell, n, m);
            a.missing_face = reverse_cell(a.missing_face, n, m);
            a.missing_index = st.t - a.missing_index;
            a.kind = classify(a.missing_index, st.t, Side::Right);
            a.marked_edge_ok = a.kind == HornKind::Inner ||
                               (a.kind == HornKind::SpecialRight && edge_marked(a.cell, st.t - 1, st.t));
        }
    }
    return rep;
}

} // namespace

FiltrationReport filtration_check(int n, int m, int k, Side side, std::optional<std::uint64_t> shuffle_seed)
{
    if (n < 1 || m < 0 || k < 0 || k > n)
        throw std::invalid_argument("filtration_check: need n >= 1, m >= 0, 0 <= k <= n");
    if (side == Side::Left && k >= n)
        throw std::invalid_argument("filtration_check: the left filtration needs k < n");
    if (side == Side::Right && k <= 0)
        throw std::invalid_argument("filtration_check: the right filtration needs k > 0");
    FiltrationReport rep = side == Side::Left ? build_left(n, m, k, shuffle_seed)
                                              : transport_to_right(build_left(n, m, n - k, shuffle_seed), k);
    rep.failure = validate_filtration(rep);
    rep.ok = rep.failure.empty();
    return rep;
}

std::string validate_filtration(const FiltrationReport& rep)
{
    const int n = rep.n, m = rep.m, k = rep.k;
    const Side side = rep.side;
    if (side == Side::Left ? k >= n : k <= 0)
        return "parameters do not fit the side";

    auto all = all_product_cells(n, m);
    if (all.size() != rep.total_cells)
        return "total cell count differs";
    std::set<ProductCell> current;
    for (const auto& c : all)
        if (in_Y0(c, n, m, k))
            current.insert(c);
    if (current.size() != rep.y0_cells)
        return "starting subcomplex size differs";

    std::size_t attached = 0;
    std::size_t next_stage = 0;
    for (int i = 1; i <= m + 1; ++i) {
        const auto v = stage_vertex(side, m, k, i);
        const std::set<ProductCell> start = current;
        for (const auto& c : all)
            if (c.dim() <= n - 1 && c.contains(v) && !current.count(c))
                return "stage " + std::to_string(i) + ": low-dimensional cell " + c.format() +
                       " through the new vertex is missing";

        int last_t = n - 1;
        while (next_stage < rep.stages.size() && rep.stages[next_stage].i == i) {
            const FiltrationStage& st = rep.stages[next_stage++];
            const std::string where = "stage " + std::to_string(i) + " t=" + std::to_string(st.t);
            if (st.t <= last_t || st.t > n + m)
                return where + ": sub-stages out of order";
            if (st.vertex != v)
                return where + ": wrong stage vertex";
            // skipped sub-stages must have had nothing to attach
            for (int t = last_t + 1; t < st.t; ++t)
                for (const auto& y : product_cells(n, m, t))
                    if (y.contains(v) && !current.count(y))
                        return "stage " + std::to_string(i) + " t=" + std::to_string(t) + ": cell " + y.format() +
                               " was never attached";
            last_t = st.t;

            for (const auto& a : st.cells) {
                const ProductCell& y = a.cell;
                const std::string at = where + " cell " + y.format();
                try {
                    validate_cell(y, n, m);
                } catch (const std::exception& e) {
                    return at + ": " + e.what();
                }
                if (y.dim() != st.t)
                    return at + ": wrong dimension";
                const int j = column_index(y, v);
                if (j < 0 || j != a.missing_index)
                    return at + ": missing face index does not point at the stage vertex";
                if (side == Side::Left && j == y.dim())
                    return at + ": stage vertex is the last column";
                if (side == Side::Right && j == 0)
                    return at + ": stage vertex is the first column";
                if (a.missing_face != y.face(j))
                    return at + ": missing face mismatch";
                const HornKind kind = classify(j, st.t, side);
                if (kind == HornKind::Invalid || kind != a.kind)
                    return at + ": horn kind mismatch";
                bool marked = true;
                if (kind == HornKind::SpecialLeft)
                    marked = edge_marked(y, 0, 1);
                if (kind == HornKind::SpecialRight)
                    marked = edge_marked(y, st.t - 1, st.t);
                if (!marked || !a.marked_edge_ok)
                    return at + ": special horn edge is not marked";
                if (current.count(y))
                    return at + ": cell already present";
                for (int f = 0; f <= y.dim(); ++f)
                    if (f != j && !current.count(y.face(f)))
                        return at + ": face " + std::to_string(f) + " is not yet present";
                if (current.count(a.missing_face))
                    return at + ": missing face already present";
                int sharing = 0;
                for (const auto& b : st.cells)
                    for (int f = 0; f <= b.cell.dim(); ++f)
                        if (b.cell.face(f) == a.missing_face)
                            ++sharing;
                if (sharing != 1)
                    return at + ": missing face is shared by another attached cell";
                current.insert(y);
                current.insert(a.missing_face);
                ++attached;
            }
            for (const auto& y : product_cells(n, m, st.t))
                if (y.contains(v) && !current.count(y))
                    return where + ": cell " + y.format() + " through the stage vertex was not attached";
        }
        for (int t = last_t + 1; t <= n + m; ++t)
            for (const auto& y : product_cells(n, m, t))
                if (y.contains(v) && !current.count(y))
                    return "stage " + std::to_string(i) + " t=" + std::to_string(t) + ": cell " + y.format() +
                           " was never attached";

        // The stage must end exactly at the subcomplex generated by the
        // previous one and every cell through v.
        std::set<ProductCell> expected = start;
        for (const auto& c : all)
            if (with_column(c, v))
                expected.insert(c);
        if (expected != current)
            return "stage " + std::to_string(i) + ": result differs from the generated subcomplex";
    }
    if (next_stage != rep.stages.size())
        return "report has stages beyond m+1";
    if (current.size() != all.size())
        return "final stage is not the whole product";
    if (attached != rep.attached || attached != rep.missing_faces)
        return "attachment totals differ";
    if (rep.y0_cells + rep.attached + rep.missing_faces != rep.total_cells)
        return "cell accounting does not add up";
    return {};
}

nlohmann::json FiltrationReport::to_json() const
{
    nlohmann::json j;
    nlohmann::json params;
    params["n"] = n;
    params["m"] = m;
    params["k"] = k;
    params["side"] = to_string(side);
    if (shuffle_seed)
        params["shuffle_seed"] = *shuffle_seed;
    j["params"] = params;
    nlohmann::json stages_j = nlohmann::json::array();
    for (const auto& st : stages) {
        nlohmann::json s;
        s["i"] = st.i;
        s["t"] = st.t;
        s["vertex"] = {st.vertex.first, st.vertex.second};
        nlohmann::json cells = nlohmann::json::array();
        for (const auto& a : st.cells) {
            nlohmann::json c;
            nlohmann::json cols = nlohmann::json::array();
            for (auto [x, u] : a.cell.columns)
                cols.push_back({x, u});
            c["columns"] = cols;
            c["missing_index"] = a.missing_index;
            c["horn_kind"] = to_string(a.kind);
            c["marked_edge_ok"] = a.marked_edge_ok;
            cells.push_back(c);
        }
        s["cells"] = cells;
        stages_j.push_back(s);
    }
    j["stages"] = stages_j;
    j["totals"] = {{"y0", y0_cells}, {"attached", attached}, {"missing_faces", missing_faces}, {"total", total_cells}};
    j["verdict"] = ok ? "pass" : "fail";
    if (!failure.empty())
        j["failure"] = failure;
    return j;
}

} // namespace relcat
