#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace relcat {

/// Nondegenerate simplex of the product of two simplices, written as its
/// columns (a_t, u_t); columns weakly increase in both coordinates and
/// adjacent columns differ.
struct ProductCell {
    std::vector<std::pair<int, int>> columns;

    int dim() const { return static_cast<int>(columns.size()) - 1; }
    bool contains(std::pair<int, int> col) const;
    ProductCell face(int j) const;
    std::string format() const;

    auto operator<=>(const ProductCell&) const = default;
};

/// Throws std::invalid_argument if the columns are out of range, not
/// weakly increasing, or repeat.
void validate_cell(const ProductCell& c, int n, int m);

/// All nondegenerate r-cells of Delta[n] x Delta[m] in lexicographic order.
std::vector<ProductCell> product_cells(int n, int m, int r);

/// All nondegenerate cells of every dimension.
std::vector<ProductCell> all_product_cells(int n, int m);

/// Membership in the starting subcomplex: the a-set is neither {0..n} nor
/// {0..n} minus k, or the u-set is not {0..m}.
bool in_Y0(const ProductCell& c, int n, int m, int k);

/// (a, u) -> (n - a, m - u) with the column order reversed.
ProductCell reverse_cell(const ProductCell& c, int n, int m);

/// Edge between columns i and j is marked iff their second coordinates agree.
bool edge_marked(const ProductCell& c, int i, int j);

enum class HornKind { Inner, SpecialLeft, SpecialRight, Invalid };
enum class Side { Left, Right };

std::string to_string(HornKind h);
std::string to_string(Side s);

struct Attachment {
    ProductCell cell;
    int missing_index = -1;
    ProductCell missing_face;
    HornKind kind = HornKind::Invalid;
    bool marked_edge_ok = false;
};

struct FiltrationStage {
    int i = 0;                         // 1 .. m+1
    int t = 0;                         // dimension of the attached cells
    std::pair<int, int> vertex{0, 0};  // column added in this stage
    std::vector<Attachment> cells;
};

struct FiltrationReport {
    int n = 0, m = 0, k = 0;
    Side side = Side::Left;
    std::optional<std::uint64_t> shuffle_seed;
    std::size_t y0_cells = 0;
    std::size_t attached = 0;
    std::size_t missing_faces = 0;
    std::size_t total_cells = 0;
    std::vector<FiltrationStage> stages;
    bool ok = false;
    std::string failure;

    nlohmann::json to_json() const;
};

/// Builds the stage-by-stage horn filling of Delta[n] x Delta[m] from the
/// starting subcomplex and validates it by replay. Left needs k < n; right
/// needs k > 0 and is obtained from the left filtration for n - k through
/// reverse_cell. With a shuffle seed the cells inside each sub-stage are
/// attached in a seeded random order instead of lexicographic order.
FiltrationReport filtration_check(int n, int m, int k, Side side,
                                  std::optional<std::uint64_t> shuffle_seed = std::nullopt);

/// Replays a report against the product of simplices and checks every
/// claim in it; returns an empty string on success.
std::string validate_filtration(const FiltrationReport& report);

} // namespace relcat
