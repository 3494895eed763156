#pragma once

#include "certiq/geometry.hpp"

#include <vector>

namespace certiq {

inline constexpr int kMaxQuadratureExactness = 20;

/// Rule on the reference triangle (0,0), (1,0), (0,1). Points are barycentric,
/// weights sum to the reference area 1/2.
struct QuadratureRule {
    int exactness = 0;
    std::vector<Bary> points;
    std::vector<double> weights;

    std::size_t size() const noexcept { return points.size(); }
};

/// Cached rule exact for polynomials of total degree <= `exactness`. Symmetric
/// rules with positive weights up to degree 5, collapsed Gauss-Legendre beyond.
/// Every rule is checked at construction against the closed-form barycentric
/// monomial integrals. Throws InvalidArgument above kMaxQuadratureExactness.
const QuadratureRule& quad_rule(int exactness);

/// Gauss-Legendre rule on [0, 1] with n points.
struct GaussRule1D {
    std::vector<double> points;
    std::vector<double> weights;
};
GaussRule1D gauss_legendre_01(int n);

/// Exact integral of l0^a l1^b l2^c over the reference triangle.
double bary_monomial_integral(int a, int b, int c);

} // namespace certiq
