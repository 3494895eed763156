#pragma once

#include "certiq/geometry.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <utility>
#include <vector>

namespace certiq {

inline constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

using Triangle = std::array<std::size_t, 3>;

/// Edge with canonical orientation v[0] < v[1]. `left` is the triangle that
/// traverses v[0] -> v[1] counter-clockwise, `right` the one that traverses it
/// backwards; either may be kNone on the boundary.
struct Edge {
    std::array<std::size_t, 2> v{};
    std::size_t left = kNone;
    std::size_t right = kNone;

    bool is_boundary() const noexcept { return left == kNone || right == kNone; }
    std::size_t count() const noexcept { return (left != kNone ? 1u : 0u) + (right != kNone ? 1u : 0u); }
};

/// Matching, positively oriented 2D triangulation.
///
/// Triangles are stored counter-clockwise. Local edge i of a triangle is the
/// edge opposite its local vertex i. Local vertex 0 doubles as the "newest
/// vertex" for bisection refinement, so local edge 0 is the refinement edge.
/// A Mesh is immutable once constructed.
class Mesh {
public:
    Mesh() = default;

    /// Validates and builds the edge structure. Throws MeshError on an out of
    /// range index, a non-positive triangle area, an edge shared by more than
    /// two triangles, or inconsistent orientation across an edge.
    Mesh(std::vector<Point2> vertices, std::vector<Triangle> triangles, std::vector<int> vertex_refs = {},
         std::vector<int> triangle_refs = {});

    std::size_t num_vertices() const noexcept { return vertices_.size(); }
    std::size_t num_triangles() const noexcept { return triangles_.size(); }
    std::size_t num_edges() const noexcept { return edges_.size(); }

    const std::vector<Point2>& vertices() const noexcept { return vertices_; }
    const std::vector<Triangle>& triangles() const noexcept { return triangles_; }
    const std::vector<Edge>& edges() const noexcept { return edges_; }
    const std::vector<int>& vertex_refs() const noexcept { return vertex_refs_; }
    const std::vector<int>& triangle_refs() const noexcept { return triangle_refs_; }

    const Point2& vertex(std::size_t v) const { return vertices_[v]; }
    const Triangle& triangle(std::size_t k) const { return triangles_[k]; }
    const Edge& edge(std::size_t e) const { return edges_[e]; }

    /// Global edge ids of triangle k, entry i opposite local vertex i.
    const std::array<std::size_t, 3>& triangle_edges(std::size_t k) const { return triangle_edges_[k]; }
    std::array<Point2, 3> triangle_points(std::size_t k) const;

    bool is_boundary_vertex(std::size_t v) const { return boundary_vertex_[v] != 0; }
    bool is_boundary_edge(std::size_t e) const { return edges_[e].is_boundary(); }
    const std::vector<std::uint8_t>& boundary_vertex_flags() const noexcept { return boundary_vertex_; }

    /// Triangles containing vertex v, ascending.
    const std::vector<std::size_t>& vertex_triangles(std::size_t v) const { return vertex_triangles_[v]; }

    /// Edge id joining u and v, or kNone.
    std::size_t find_edge(std::size_t u, std::size_t v) const;

    std::size_t num_boundary_vertices() const noexcept;

private:
    std::vector<Point2> vertices_;
    std::vector<Triangle> triangles_;
    std::vector<int> vertex_refs_;
    std::vector<int> triangle_refs_;
    std::vector<Edge> edges_;
    std::vector<std::array<std::size_t, 3>> triangle_edges_;
    std::vector<std::uint8_t> boundary_vertex_;
    std::vector<std::vector<std::size_t>> vertex_triangles_;
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> edge_lookup_;
};

/// Per-element size quantities.
struct ElementGeometry {
    double h = 0.0;        ///< diameter (longest edge)
    double rho = 0.0;      ///< inscribed circle diameter
    double kappa = 0.0;    ///< h / rho
    double area = 0.0;
    std::array<double, 3> tau{};  ///< distance from local vertex i to the line of the opposite edge
    Point2 barycenter{};
};

ElementGeometry element_geometry(const Mesh& mesh, std::size_t k);
ElementGeometry triangle_geometry(const std::array<Point2, 3>& p);

/// Elements sharing a vertex, with patch-local numbering.
struct VertexPatch {
    std::size_t center = 0;
    std::vector<std::size_t> elements;          ///< global triangle ids, ascending
    std::vector<int> center_local_index;        ///< local vertex index of `center` in each element
    std::vector<std::size_t> vertices;          ///< patch-local -> global vertex id, center first
    std::vector<std::size_t> edges;             ///< patch-local -> global edge id, ascending
    double h_a = 0.0;                           ///< max element diameter in the patch
    bool is_boundary = false;

    /// Patch-local index of a global element, or kNone.
    std::size_t local_element(std::size_t global) const;
};

VertexPatch vertex_patch(const Mesh& mesh, std::size_t a);
std::vector<VertexPatch> vertex_patches(const Mesh& mesh);

enum class Domain { unit_square, square2, lshape };

/// Cartesian grid of n x n squares over the bounding box of `domain`, each
/// split into four triangles through its barycenter. The L-shape removes the
/// quadrant [0,1]^2 from (-1,1)^2 and requires an even n.
Mesh build_crisscross(int n, Domain domain);

} // namespace certiq
