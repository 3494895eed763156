#pragma once

#include "certiq/linalg.hpp"
#include "certiq/polynomial.hpp"
#include "certiq/quadrature.hpp"

#include <span>
#include <vector>

namespace certiq {

inline constexpr int kMaxLagrangeDegree = 4;

/// Nodal P_q basis on the principal lattice. Node i has barycentric
/// coordinates multi_indices(q)[i] / q.
class LagrangeBasis {
public:
    explicit LagrangeBasis(int q);

    int degree() const noexcept { return q_; }
    std::size_t size() const noexcept { return nodes_.size(); }

    const std::vector<Bary>& nodes() const noexcept { return nodes_; }
    const MultiIndex& lattice_index(std::size_t i) const { return multi_indices(q_)[i]; }

    /// Column j holds the monomial coefficients of basis function j.
    const DenseMatrix& coefficients() const noexcept { return coeffs_; }
    BaryPoly function(std::size_t j) const;

    /// Polynomial with the given nodal values.
    BaryPoly from_nodal(std::span<const double> values) const;
    /// Values of `poly` at the lattice nodes.
    Vector to_nodal(const BaryPoly& poly) const;

    /// 1-norm condition estimate of the lattice Vandermonde matrix.
    double vandermonde_condition() const noexcept { return vandermonde_condition_; }

private:
    int q_;
    std::vector<Bary> nodes_;
    DenseMatrix coeffs_;
    double vandermonde_condition_ = 0.0;
};

/// Cached basis for 1 <= q <= 4; InvalidArgument otherwise.
const LagrangeBasis& p_basis(int q);

/// Elementwise Lagrange interpolation onto P_p: the degree-p polynomial that
/// agrees with `poly` at every node of the degree-p lattice.
BaryPoly lagrange_reduce(const BaryPoly& poly, int p);

/// Basis values and barycentric partials at the points of a quadrature rule.
struct LagrangeTable {
    const LagrangeBasis* basis = nullptr;
    const QuadratureRule* rule = nullptr;
    std::vector<Vector> values;                            ///< [point][function]
    std::vector<std::vector<std::array<double, 3>>> bary_grads;  ///< [point][function]
};

/// Cached table for (q, exactness).
const LagrangeTable& lagrange_table(int q, int exactness);

} // namespace certiq
