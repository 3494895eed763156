#include "certiq/mesh.hpp"

#include "certiq/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace certiq {

Mesh::Mesh(std::vector<Point2> vertices, std::vector<Triangle> triangles, std::vector<int> vertex_refs,
           std::vector<int> triangle_refs)
    : vertices_(std::move(vertices)),
      triangles_(std::move(triangles)),
      vertex_refs_(std::move(vertex_refs)),
      triangle_refs_(std::move(triangle_refs)) {
    const std::size_t nv = vertices_.size();
    if (vertex_refs_.empty()) vertex_refs_.assign(nv, 0);
    if (triangle_refs_.empty()) triangle_refs_.assign(triangles_.size(), 0);
    if (vertex_refs_.size() != nv || triangle_refs_.size() != triangles_.size())
        throw MeshError("mesh: reference tag count does not match entity count");

    for (const Point2& p : vertices_)
        if (!std::isfinite(p.x) || !std::isfinite(p.y)) throw MeshError("mesh: non-finite vertex coordinate");

    vertex_triangles_.assign(nv, {});
    triangle_edges_.resize(triangles_.size());
    for (std::size_t k = 0; k < triangles_.size(); ++k) {
        const Triangle& t = triangles_[k];
        for (std::size_t v : t)
            if (v >= nv) throw MeshError("mesh: triangle " + std::to_string(k) + " references missing vertex");
        if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2])
            throw MeshError("mesh: triangle " + std::to_string(k) + " repeats a vertex");
        if (!(signed_area2(vertices_[t[0]], vertices_[t[1]], vertices_[t[2]]) > 0.0))
            throw MeshError("mesh: triangle " + std::to_string(k) + " has non-positive area");
        for (std::size_t v : t) vertex_triangles_[v].push_back(k);

        for (int i = 0; i < 3; ++i) {
            // Counter-clockwise traversal of the edge opposite local vertex i.
            const std::size_t from = t[(i + 1) % 3];
            const std::size_t to = t[(i + 2) % 3];
            const auto key = std::minmax(from, to);
            auto [it, inserted] = edge_lookup_.try_emplace({key.first, key.second}, edges_.size());
            if (inserted) edges_.push_back(Edge{{key.first, key.second}, kNone, kNone});
            Edge& e = edges_[it->second];
            std::size_t& slot = (from < to) ? e.left : e.right;
            if (slot != kNone) {
                throw MeshError("mesh: edge (" + std::to_string(key.first) + "," + std::to_string(key.second) +
                                ") is shared by more than two triangles or inconsistently oriented");
            }
            slot = k;
            triangle_edges_[k][static_cast<std::size_t>(i)] = it->second;
        }
    }

    boundary_vertex_.assign(nv, 0);
    for (const Edge& e : edges_) {
        if (e.is_boundary()) {
            boundary_vertex_[e.v[0]] = 1;
            boundary_vertex_[e.v[1]] = 1;
        }
    }
}

std::array<Point2, 3> Mesh::triangle_points(std::size_t k) const {
    const Triangle& t = triangles_[k];
    return {vertices_[t[0]], vertices_[t[1]], vertices_[t[2]]};
}

std::size_t Mesh::find_edge(std::size_t u, std::size_t v) const {
    const auto key = std::minmax(u, v);
    const auto it = edge_lookup_.find({key.first, key.second});
    return it == edge_lookup_.end() ? kNone : it->second;
}

std::size_t Mesh::num_boundary_vertices() const noexcept {
    return static_cast<std::size_t>(std::count(boundary_vertex_.begin(), boundary_vertex_.end(), 1));
}

ElementGeometry triangle_geometry(const std::array<Point2, 3>& p) {
    ElementGeometry g;
    g.area = 0.5 * signed_area2(p[0], p[1], p[2]);
    std::array<double, 3> len{};
    for (int i = 0; i < 3; ++i) len[static_cast<std::size_t>(i)] = norm(p[(i + 2) % 3] - p[(i + 1) % 3]);
    g.h = std::max({len[0], len[1], len[2]});
    const double semiperimeter = 0.5 * (len[0] + len[1] + len[2]);
    g.rho = 2.0 * g.area / semiperimeter;
    g.kappa = g.h / g.rho;
    for (std::size_t i = 0; i < 3; ++i) g.tau[i] = 2.0 * g.area / len[i];
    g.barycenter = (1.0 / 3.0) * (p[0] + p[1] + p[2]);
    return g;
}

ElementGeometry element_geometry(const Mesh& mesh, std::size_t k) {
    return triangle_geometry(mesh.triangle_points(k));
}

std::size_t VertexPatch::local_element(std::size_t global) const {
    const auto it = std::lower_bound(elements.begin(), elements.end(), global);
    if (it == elements.end() || *it != global) return kNone;
    return static_cast<std::size_t>(it - elements.begin());
}

VertexPatch vertex_patch(const Mesh& mesh, std::size_t a) {
    VertexPatch patch;
    patch.center = a;
    patch.elements = mesh.vertex_triangles(a);
    patch.is_boundary = mesh.is_boundary_vertex(a);
    patch.vertices.push_back(a);
    for (std::size_t k : patch.elements) {
        const Triangle& t = mesh.triangle(k);
        const auto pos = std::find(t.begin(), t.end(), a);
        patch.center_local_index.push_back(static_cast<int>(pos - t.begin()));
        patch.h_a = std::max(patch.h_a, element_geometry(mesh, k).h);
        for (std::size_t v : t)
            if (std::find(patch.vertices.begin(), patch.vertices.end(), v) == patch.vertices.end())
                patch.vertices.push_back(v);
        for (std::size_t e : mesh.triangle_edges(k)) patch.edges.push_back(e);
    }
    std::sort(patch.vertices.begin() + 1, patch.vertices.end());
    std::sort(patch.edges.begin(), patch.edges.end());
    patch.edges.erase(std::unique(patch.edges.begin(), patch.edges.end()), patch.edges.end());
    return patch;
}

std::vector<VertexPatch> vertex_patches(const Mesh& mesh) {
    std::vector<VertexPatch> patches;
    patches.reserve(mesh.num_vertices());
    for (std::size_t a = 0; a < mesh.num_vertices(); ++a) patches.push_back(vertex_patch(mesh, a));
    return patches;
}

Mesh build_crisscross(int n, Domain domain) {
    if (n < 1) throw InvalidArgument("build_crisscross: n must be at least 1");
    if (domain == Domain::lshape && n % 2 != 0)
        throw InvalidArgument("build_crisscross: the L-shape needs an even number of cells per side");

    const double lo = domain == Domain::unit_square ? 0.0 : -1.0;
    const double hi = 1.0;
    const double step = (hi - lo) / n;
    const auto cell_kept = [&](int i, int j) {
        if (domain != Domain::lshape) return true;
        return !(2 * i >= n && 2 * j >= n);
    };

    const std::size_t grid = static_cast<std::size_t>(n + 1);
    std::vector<std::size_t> grid_id(grid * grid, kNone);
    std::vector<Point2> vertices;
    std::vector<Triangle> triangles;
    const auto grid_vertex = [&](int i, int j) {
        std::size_t& id = grid_id[static_cast<std::size_t>(j) * grid + static_cast<std::size_t>(i)];
        if (id == kNone) {
            id = vertices.size();
            vertices.push_back({lo + i * step, lo + j * step});
        }
        return id;
    };

    // Grid vertices first (row by row), then cell centers.
    for (int j = 0; j <= n; ++j) {
        for (int i = 0; i <= n; ++i) {
            bool used = false;
            for (int dj = -1; dj <= 0; ++dj)
                for (int di = -1; di <= 0; ++di) {
                    const int ci = i + di;
                    const int cj = j + dj;
                    if (ci >= 0 && cj >= 0 && ci < n && cj < n && cell_kept(ci, cj)) used = true;
                }
            if (used) grid_vertex(i, j);
        }
    }
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            if (!cell_kept(i, j)) continue;
            const std::size_t c00 = grid_vertex(i, j);
            const std::size_t c10 = grid_vertex(i + 1, j);
            const std::size_t c11 = grid_vertex(i + 1, j + 1);
            const std::size_t c01 = grid_vertex(i, j + 1);
            const std::size_t m = vertices.size();
            vertices.push_back({lo + (i + 0.5) * step, lo + (j + 0.5) * step});
            triangles.push_back({m, c00, c10});
            triangles.push_back({m, c10, c11});
            triangles.push_back({m, c11, c01});
            triangles.push_back({m, c01, c00});
        }
    }
    return Mesh(std::move(vertices), std::move(triangles));
}

} // namespace certiq
