#pragma once

#include "certiq/geometry.hpp"

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace certiq {

using MultiIndex = std::array<int, 3>;

/// Number of barycentric monomials of total degree q, equal to dim P_q.
constexpr std::size_t num_monomials(int q) noexcept {
    return static_cast<std::size_t>((q + 1) * (q + 2) / 2);
}

/// Multi-indices of total degree q in the canonical order: a0 from q down to 0,
/// then a1 from q - a0 down to 0. Node i of the degree-q principal lattice is
/// multi_indices(q)[i] / q.
const std::vector<MultiIndex>& multi_indices(int q);
std::size_t multi_index_position(const MultiIndex& alpha) noexcept;

/// Homogeneous polynomial of degree q in (l0, l1, l2). Every polynomial of
/// total degree <= q on a triangle has exactly one such representation since
/// l0 + l1 + l2 = 1, so the degree tag is the space the polynomial lives in.
class BaryPoly {
public:
    BaryPoly() = default;
    explicit BaryPoly(int degree) : degree_(degree), coeffs_(num_monomials(degree), 0.0) {}
    BaryPoly(int degree, std::vector<double> coeffs);

    static BaryPoly constant(double c) { return BaryPoly(0, {c}); }
    static BaryPoly barycentric(int i);

    int degree() const noexcept { return degree_; }
    std::span<const double> coefficients() const noexcept { return coeffs_; }
    std::span<double> coefficients() noexcept { return coeffs_; }

    double operator()(const Bary& l) const;
    /// Partial derivatives with respect to l0, l1, l2.
    std::array<double, 3> bary_gradient(const Bary& l) const;

    /// Same polynomial written with degree `degree` >= degree().
    BaryPoly elevated(int degree) const;

    BaryPoly& operator+=(const BaryPoly& other);
    BaryPoly& operator-=(const BaryPoly& other);
    BaryPoly& operator*=(double s);

private:
    int degree_ = 0;
    std::vector<double> coeffs_{0.0};
};

BaryPoly operator*(const BaryPoly& a, const BaryPoly& b);
BaryPoly operator+(BaryPoly a, const BaryPoly& b);
BaryPoly operator-(BaryPoly a, const BaryPoly& b);
BaryPoly operator*(double s, BaryPoly a);

/// Physical gradient from barycentric partials and the constant gradients of
/// the barycentric coordinates.
inline Vec2 physical_gradient(const std::array<double, 3>& d, const std::array<Vec2, 3>& grad_lambda) noexcept {
    return d[0] * grad_lambda[0] + d[1] * grad_lambda[1] + d[2] * grad_lambda[2];
}

} // namespace certiq
