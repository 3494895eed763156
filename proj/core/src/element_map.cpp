#include "certiq/element_map.hpp"

#include "certiq/error.hpp"

#include <algorithm>

namespace certiq {

ElementMap element_map(const std::array<Point2, 3>& v) {
    ElementMap m;
    m.v = v;
    const Vec2 e1 = v[1] - v[0];
    const Vec2 e2 = v[2] - v[0];
    m.jac[0][0] = e1.x;
    m.jac[1][0] = e1.y;
    m.jac[0][1] = e2.x;
    m.jac[1][1] = e2.y;
    m.det = cross(e1, e2);
    const double scale = std::max(dot(e1, e1), dot(e2, e2));
    if (!(m.det > 1e-14 * scale)) throw InvalidArgument("element_map: degenerate or clockwise triangle");
    for (int i = 0; i < 3; ++i) {
        const Point2& a = v[(i + 1) % 3];
        const Point2& b = v[(i + 2) % 3];
        m.grad_lambda[static_cast<std::size_t>(i)] = {(a.y - b.y) / m.det, (b.x - a.x) / m.det};
    }
    return m;
}

Vec2 push_forward_gradient(const ElementMap& map, const Vec2& g) noexcept {
    // J^{-T} = (1/det) [[J11, -J10], [-J01, J00]]
    return {(map.jac[1][1] * g.x - map.jac[1][0] * g.y) / map.det,
            (-map.jac[0][1] * g.x + map.jac[0][0] * g.y) / map.det};
}

Vec2 push_forward_rt(const ElementMap& map, const Vec2& w) noexcept {
    return {(map.jac[0][0] * w.x + map.jac[0][1] * w.y) / map.det,
            (map.jac[1][0] * w.x + map.jac[1][1] * w.y) / map.det};
}

} // namespace certiq
