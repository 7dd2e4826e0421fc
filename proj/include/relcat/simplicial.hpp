#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "relcat/relposet.hpp"

namespace relcat {

using Vertex = std::uint32_t;
/// Vertex ids sorted ascending.
using Simplex = std::vector<Vertex>;

struct SimplexHash {
    std::size_t operator()(const Simplex& s) const noexcept;
};

/// Finite abstract simplicial complex on vertices 0..num_vertices-1, stored
/// per dimension in lexicographic order.
class SimComplex {
public:
    SimComplex() = default;

    /// Downward closure of the given simplices.
    static SimComplex from_facets(std::size_t num_vertices, std::vector<Simplex> facets);

    /// Throws std::invalid_argument unless the list is closed under faces
    /// and every vertex occurs.
    static SimComplex from_simplices(std::size_t num_vertices, std::vector<Simplex> simplices);

    std::size_t num_vertices() const { return num_vertices_; }
    int dimension() const { return static_cast<int>(by_dim_.size()) - 1; }
    bool empty() const { return by_dim_.empty(); }

    const std::vector<Simplex>& simplices(int d) const;
    std::size_t count(int d) const { return d < 0 || d > dimension() ? 0 : by_dim_[d].size(); }
    std::size_t total() const;
    std::optional<std::size_t> index_of(const Simplex& s) const;
    std::vector<std::size_t> f_vector() const;
    long long euler_characteristic() const;

private:
    void build_index();

    std::size_t num_vertices_ = 0;
    std::vector<std::vector<Simplex>> by_dim_;
    std::vector<std::unordered_map<Simplex, std::size_t, SimplexHash>> index_;
};

/// Strictly ascending chains of the poset.
SimComplex nerve(const Poset& p);

struct Subdivided {
    SimComplex complex;
    // vertex v of the subdivision corresponds to the simplex `origin[v]`
    std::vector<Simplex> origin;
};

/// Vertices are the simplices of k; simplices are inclusion chains.
Subdivided barycentric_subdivision(const SimComplex& k);

/// The full simplex on n+1 vertices (all nonempty subsets).
SimComplex full_simplex(int n);

/// Boundary of the n-simplex.
SimComplex simplex_boundary(int n);

/// Full subcomplex on the vertices with keep[v] set, renumbered in order;
/// old_ids[new] gives the original vertex.
SimComplex induced_subcomplex(const SimComplex& k, const std::vector<char>& keep,
                              std::vector<Vertex>* old_ids = nullptr);

/// Bijection on vertices carrying simplices of `a` exactly onto those of `b`.
bool is_complex_isomorphism(const SimComplex& a, const SimComplex& b, const std::vector<Vertex>& vertex_map);

} // namespace relcat
