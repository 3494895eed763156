#pragma once

#include "certiq/geometry.hpp"

#include <array>

namespace certiq {

/// Affine map x = v0 + J xhat from the reference triangle (0,0), (1,0), (0,1)
/// onto a physical triangle, with local vertex i going to reference vertex i.
struct ElementMap {
    std::array<Point2, 3> v{};
    double jac[2][2]{};           ///< columns v1 - v0 and v2 - v0
    double det = 0.0;             ///< twice the area, positive
    std::array<Vec2, 3> grad_lambda{};

    double area() const noexcept { return 0.5 * det; }
    Point2 point(const Bary& l) const noexcept { return l[0] * v[0] + l[1] * v[1] + l[2] * v[2]; }
    Point2 point(const Vec2& xhat) const noexcept {
        return {v[0].x + jac[0][0] * xhat.x + jac[0][1] * xhat.y, v[0].y + jac[1][0] * xhat.x + jac[1][1] * xhat.y};
    }
};

/// Throws InvalidArgument for a degenerate or clockwise triangle.
ElementMap element_map(const std::array<Point2, 3>& v);

/// Gradient of a scalar pulled back from the reference element: J^{-T} g.
Vec2 push_forward_gradient(const ElementMap& map, const Vec2& ref_gradient) noexcept;

/// Contravariant Piola map J w / det J, which preserves normal moments.
Vec2 push_forward_rt(const ElementMap& map, const Vec2& ref_value) noexcept;

/// Divergence under the Piola map.
inline double push_forward_div(const ElementMap& map, double ref_divergence) noexcept {
    return ref_divergence / map.det;
}

} // namespace certiq
