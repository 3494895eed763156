#pragma once

#include <array>
#include <cmath>

namespace certiq {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    constexpr Vec2& operator+=(const Vec2& o) noexcept { x += o.x; y += o.y; return *this; }
    constexpr Vec2& operator-=(const Vec2& o) noexcept { x -= o.x; y -= o.y; return *this; }
    constexpr Vec2& operator*=(double s) noexcept { x *= s; y *= s; return *this; }
};

using Point2 = Vec2;

constexpr Vec2 operator+(Vec2 a, const Vec2& b) noexcept { return a += b; }
constexpr Vec2 operator-(Vec2 a, const Vec2& b) noexcept { return a -= b; }
constexpr Vec2 operator-(const Vec2& a) noexcept { return {-a.x, -a.y}; }
constexpr Vec2 operator*(double s, Vec2 a) noexcept { return a *= s; }
constexpr Vec2 operator*(Vec2 a, double s) noexcept { return a *= s; }

constexpr double dot(const Vec2& a, const Vec2& b) noexcept { return a.x * b.x + a.y * b.y; }
constexpr double cross(const Vec2& a, const Vec2& b) noexcept { return a.x * b.y - a.y * b.x; }
inline double norm(const Vec2& a) noexcept { return std::hypot(a.x, a.y); }

/// Barycentric coordinates (lambda_0, lambda_1, lambda_2) on a triangle.
using Bary = std::array<double, 3>;

/// Twice the signed area of (a, b, c); positive for counter-clockwise order.
constexpr double signed_area2(const Point2& a, const Point2& b, const Point2& c) noexcept {
    return cross(b - a, c - a);
}

/// Symmetric 2x2 matrix of second derivatives.
struct Hessian2 {
    double xx = 0.0;
    double xy = 0.0;
    double yy = 0.0;
};

} // namespace certiq
