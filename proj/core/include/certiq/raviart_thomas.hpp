#pragma once

#include "certiq/geometry.hpp"
#include "certiq/linalg.hpp"
#include "certiq/mesh.hpp"
#include "certiq/quadrature.hpp"

#include <functional>
#include <vector>

namespace certiq {

inline constexpr int kMaxRtDegree = 3;

/// Shifted Legendre polynomial of degree k on [0, 1].
double shifted_legendre(int k, double t);

/// RT_p on the reference triangle, dual to the degrees of freedom
///
///   edge i, k = 0..p:  int_{e_i} w.n l_k(t) ds, e_i opposite vertex i,
///                      run counter-clockwise from vertex i+1 to i+2,
///                      n the outward unit normal, l_k shifted Legendre;
///   interior:          int_K w.(m, 0) and int_K w.(0, m) for the monomials
///                      m = x^a y^b with a + b <= p - 1.
///
/// Functions 0 .. 3(p+1)-1 are the edge functions, index i*(p+1)+k.
class RTBasis {
public:
    explicit RTBasis(int p);

    int degree() const noexcept { return p_; }
    std::size_t size() const noexcept { return static_cast<std::size_t>((p_ + 1) * (p_ + 3)); }
    std::size_t num_edge_dofs() const noexcept { return static_cast<std::size_t>(3 * (p_ + 1)); }
    std::size_t edge_dof(int edge, int k) const noexcept { return static_cast<std::size_t>(edge * (p_ + 1) + k); }

    /// Values and divergences of all basis functions at a reference point.
    void evaluate(const Vec2& xhat, std::vector<Vec2>& values, std::vector<double>& divergences) const;

    /// Applies the degrees of freedom to a reference vector field.
    Vector apply_dofs(const std::function<Vec2(const Vec2&)>& field) const;

private:
    int p_;
    DenseMatrix coeffs_;  ///< [spanning function][basis function]

    std::size_t num_span() const noexcept { return size(); }
    void evaluate_span(const Vec2& xhat, std::vector<Vec2>& values, std::vector<double>& divergences) const;
    Vector apply_dofs_impl(std::size_t span_index) const;
};

/// Cached basis for 1 <= p <= 3; InvalidArgument otherwise.
const RTBasis& rt_basis(int p);

/// Sign relating local edge function (edge, k) of triangle t to the global
/// function attached to the mesh edge with low-to-high orientation and normal
/// rotated clockwise from that direction.
int rt_edge_sign(const Triangle& t, int edge, int k) noexcept;

/// Reference values and divergences at quadrature points.
struct RTTable {
    const RTBasis* basis = nullptr;
    const QuadratureRule* rule = nullptr;
    std::vector<std::vector<Vec2>> values;       ///< [point][function]
    std::vector<std::vector<double>> divergences;
};

const RTTable& rt_table(int p, int exactness);

} // namespace certiq
