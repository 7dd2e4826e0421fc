#pragma once

#include <cstdint>
#include <vector>

#include <gmpxx.h>
#include <json.hpp>

namespace relcat {

using Rational = mpq_class;

/// Sparse rational matrix stored by rows; each row is sorted by column and
/// holds no explicit zeros.
class QMatrix {
public:
    using Entry = std::pair<std::uint32_t, Rational>;
    using Row = std::vector<Entry>;

    QMatrix() = default;
    QMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows) {}

    static QMatrix identity(std::size_t n, const Rational& scale = 1);
    static QMatrix from_rows(const std::vector<std::vector<long>>& rows);
    static QMatrix from_rows(std::size_t rows, std::size_t cols, std::vector<Row> data);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t nnz() const;
    const Row& row(std::size_t i) const { return data_[i]; }
    Rational at(std::size_t i, std::size_t j) const;
    void set(std::size_t i, std::size_t j, const Rational& v);

    QMatrix operator*(const QMatrix& o) const;
    QMatrix operator+(const QMatrix& o) const;
    QMatrix operator-(const QMatrix& o) const;
    QMatrix operator-() const;
    QMatrix scaled(const Rational& s) const;
    QMatrix transpose() const;
    bool operator==(const QMatrix& o) const;
    bool is_zero() const;

    QMatrix select_rows(const std::vector<std::uint32_t>& ids) const;
    QMatrix select_cols(const std::vector<std::uint32_t>& ids) const;
    std::vector<Rational> apply(const std::vector<Rational>& v) const;

    /// {rows, cols, entries: [[i, j, num, den], ...]} with numerators and
    /// denominators as decimal strings.
    nlohmann::json to_json() const;
    static QMatrix from_json(const nlohmann::json& j);

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<Row> data_;
};

/// Collects blocks and single entries, summing duplicates.
class MatrixBuilder {
public:
    MatrixBuilder(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows) {}
    void add(std::size_t i, std::size_t j, const Rational& v);
    void add_block(std::size_t r0, std::size_t c0, const QMatrix& m, const Rational& scale = 1);
    void add_identity(std::size_t r0, std::size_t c0, std::size_t n, const Rational& scale = 1);
    QMatrix build();

private:
    std::size_t rows_, cols_;
    std::vector<QMatrix::Row> data_;
};

/// Horizontal and vertical concatenation, block diagonal sum.
QMatrix hstack(const QMatrix& a, const QMatrix& b);
QMatrix vstack(const QMatrix& a, const QMatrix& b);
QMatrix block_diag(const QMatrix& a, const QMatrix& b);

/// Arithmetic modulo the prime 2^61 - 1.
struct ModP {
    static constexpr std::uint64_t P = (std::uint64_t{1} << 61) - 1;
    std::uint64_t v = 0;

    ModP() = default;
    explicit ModP(std::uint64_t x) : v(x % P) {}
    static ModP from_signed(long long x);
    /// Throws std::domain_error if the denominator vanishes modulo P.
    static ModP from_rational(const Rational& q);

    ModP operator+(ModP o) const;
    ModP operator-(ModP o) const;
    ModP operator*(ModP o) const;
    ModP operator-() const;
    ModP inverse() const;
    bool is_zero() const { return v == 0; }
    bool operator==(const ModP&) const = default;
};

/// Rank modulo P; never larger than the rational rank. Throws
/// std::domain_error if an entry has a denominator divisible by P.
std::size_t rank_mod_p(const QMatrix& m);

/// Exact rational rank. Tries the modular rank first and accepts it when it
/// is already maximal, else eliminates over the rationals.
std::size_t rank(const QMatrix& m);

/// Rational rank by sparse elimination, no shortcut.
std::size_t rank_exact(const QMatrix& m);

struct Kernel {
    QMatrix basis;                        // cols x dim; columns span the kernel
    std::vector<std::uint32_t> free_cols; // basis vector j is 1 at free_cols[j], 0 at the other free columns
    /// Coordinates of a kernel vector: its entries at the free columns.
    std::vector<Rational> coordinates(const std::vector<Rational>& v) const;
};

Kernel kernel(const QMatrix& m);

} // namespace relcat
