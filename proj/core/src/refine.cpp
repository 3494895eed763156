#include "certiq/refine.hpp"

#include "certiq/error.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <utility>

namespace certiq {

namespace {

using EdgeKey = std::pair<std::size_t, std::size_t>;

EdgeKey key(std::size_t a, std::size_t b) { return a < b ? EdgeKey{a, b} : EdgeKey{b, a}; }

EdgeKey refinement_edge(const Triangle& t) { return key(t[1], t[2]); }

class Bisector {
public:
    Bisector(const Mesh& mesh, std::set<EdgeKey> marked)
        : vertices_(mesh.vertices()), vertex_refs_(mesh.vertex_refs()), marked_(std::move(marked)) {}

    void bisect(const Triangle& t, int ref) {
        if (!marked_.count(refinement_edge(t))) {
            triangles_.push_back(t);
            triangle_refs_.push_back(ref);
            return;
        }
        const std::size_t m = midpoint(t[1], t[2]);
        bisect({m, t[0], t[1]}, ref);
        bisect({m, t[2], t[0]}, ref);
    }

    Mesh finish() {
        return Mesh(std::move(vertices_), std::move(triangles_), std::move(vertex_refs_), std::move(triangle_refs_));
    }

private:
    std::size_t midpoint(std::size_t a, std::size_t b) {
        const auto [it, inserted] = midpoints_.try_emplace(key(a, b), vertices_.size());
        if (inserted) {
            vertices_.push_back(0.5 * (vertices_[a] + vertices_[b]));
            vertex_refs_.push_back(0);
        }
        return it->second;
    }

    std::vector<Point2> vertices_;
    std::vector<int> vertex_refs_;
    std::vector<Triangle> triangles_;
    std::vector<int> triangle_refs_;
    std::set<EdgeKey> marked_;
    std::map<EdgeKey, std::size_t> midpoints_;
};

} // namespace

Mesh bisect_marked(const Mesh& mesh, const std::vector<std::size_t>& marked) {
    if (marked.empty()) return mesh;
    std::set<EdgeKey> edges;
    for (std::size_t k : marked) {
        if (k >= mesh.num_triangles()) throw InvalidArgument("bisect_marked: element index out of range");
        edges.insert(refinement_edge(mesh.triangle(k)));
    }
    // Closure: an element with any marked edge must also split its refinement edge.
    for (bool changed = true; changed;) {
        changed = false;
        for (const Triangle& t : mesh.triangles()) {
            const EdgeKey r = refinement_edge(t);
            if (edges.count(r)) continue;
            if (edges.count(key(t[0], t[1])) || edges.count(key(t[0], t[2]))) {
                edges.insert(r);
                changed = true;
            }
        }
    }
    Bisector bisector(mesh, std::move(edges));
    for (std::size_t k = 0; k < mesh.num_triangles(); ++k) bisector.bisect(mesh.triangle(k), mesh.triangle_refs()[k]);
    return bisector.finish();
}

Mesh bisect_uniform(const Mesh& mesh, int rounds) {
    Mesh out = mesh;
    for (int r = 0; r < rounds; ++r) {
        std::vector<std::size_t> all(out.num_triangles());
        std::iota(all.begin(), all.end(), std::size_t{0});
        out = bisect_marked(out, all);
    }
    return out;
}

Mesh refine_graded(const Mesh& mesh, const SizeRule& rule, const RefineOptions& options) {
    Mesh out = mesh;
    while (true) {
        std::vector<std::size_t> marked;
        for (std::size_t k = 0; k < out.num_triangles(); ++k) {
            const ElementGeometry g = element_geometry(out, k);
            if (g.h > rule(g.barycenter)) marked.push_back(k);
        }
        if (marked.empty()) return out;
        out = bisect_marked(out, marked);
        if (out.num_triangles() > options.max_elements) {
            throw RefinementBudgetError("refine_graded: element count " + std::to_string(out.num_triangles()) +
                                        " exceeds the budget of " + std::to_string(options.max_elements));
        }
    }
}

SizeRule corner_grading(double h_max, double grading_const) {
    if (!(h_max > 0.0) || !(grading_const > 0.0))
        throw InvalidArgument("corner_grading: h_max and the grading constant must be positive");
    return [h_max, grading_const](const Point2& x) {
        return grading_const * std::max(std::pow(h_max, 1.5), std::cbrt(norm(x)) * h_max);
    };
}

Mesh longest_edge_labeling(const Mesh& mesh) {
    std::vector<Triangle> triangles = mesh.triangles();
    for (Triangle& t : triangles) {
        int best = 0;
        double best_len = -1.0;
        for (int i = 0; i < 3; ++i) {
            const double len = norm(mesh.vertex(t[static_cast<std::size_t>((i + 2) % 3)]) -
                                    mesh.vertex(t[static_cast<std::size_t>((i + 1) % 3)]));
            if (len > best_len * (1.0 + 1e-12)) {
                best = i;
                best_len = len;
            }
        }
        const auto b = static_cast<std::size_t>(best);
        t = {t[b], t[(b + 1) % 3], t[(b + 2) % 3]};
    }
    return Mesh(mesh.vertices(), std::move(triangles), mesh.vertex_refs(), mesh.triangle_refs());
}

} // namespace certiq
