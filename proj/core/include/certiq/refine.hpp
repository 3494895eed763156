#pragma once

#include "certiq/mesh.hpp"

#include <cstddef>
#include <functional>
#include <vector>

namespace certiq {

/// Largest admissible element diameter as a function of the barycenter.
using SizeRule = std::function<double(const Point2& barycenter)>;

struct RefineOptions {
    std::size_t max_elements = 2'000'000;
};

/// Newest-vertex bisection of the marked elements plus the closure needed to
/// keep the mesh matching. The refinement edge of a triangle is its local
/// edge 0, and both children carry the new midpoint as local vertex 0.
Mesh bisect_marked(const Mesh& mesh, const std::vector<std::size_t>& marked);

/// Bisects every element `rounds` times (two rounds halve all diameters on
/// criss-cross and longest-edge labeled meshes).
Mesh bisect_uniform(const Mesh& mesh, int rounds);

/// Repeats bisect_marked on the elements with h_K > rule(x_K) until no element
/// violates the rule. Throws RefinementBudgetError past options.max_elements.
Mesh refine_graded(const Mesh& mesh, const SizeRule& rule, const RefineOptions& options = {});

/// C_g max(h_max^{3/2}, |x|^{1/3} h_max), the grading towards a reentrant
/// corner at the origin.
SizeRule corner_grading(double h_max, double grading_const = 1.0);

/// Relabels every triangle (keeping orientation) so that its longest edge is
/// local edge 0. Useful before bisecting meshes read from files.
Mesh longest_edge_labeling(const Mesh& mesh);

} // namespace certiq
