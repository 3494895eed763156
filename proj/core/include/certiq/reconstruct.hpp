#pragma once

#include "certiq/fields.hpp"
#include "certiq/linalg.hpp"
#include "certiq/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <vector>

namespace certiq {

/// Default quadrature exactness for (grad u, grad q)_K data terms: 2p + 8.
int default_data_exactness(int p) noexcept;

/// Elementwise H^1 projection onto P_p with mean preservation, solved as a
/// bordered system (gradient Gram matrix plus one mean-value row).
/// `exactness` <= 0 selects default_data_exactness(p).
BrokenField local_best(const ElementSource& u, const Mesh& mesh, int p, int exactness = 0);
BrokenField local_best(const FieldFunction& u, const Mesh& mesh, int p, int exactness = 0);

/// Blocks of `field` on the patch elements, in patch order.
std::vector<BaryPoly> restrict_to_patch(const BrokenField& field, const VertexPatch& patch);

/// Conforming patch minimizer s of |grad_h(I^p(psi_a u_h) - s)| over
/// P_p(T_a) with zero trace on the patch boundary. The stiffness matrix is
/// factored once; solve() may then be called for many data.
class PotentialReconstruction {
public:
    PotentialReconstruction(const Mesh& mesh, const VertexPatch& patch, int p);

    int degree() const noexcept { return p_; }
    std::size_t num_elements() const noexcept { return maps_.size(); }
    std::size_t num_dofs() const noexcept { return space_.num_dofs(); }
    const ConformingDofMap& space() const noexcept { return space_; }
    const DenseMatrix& stiffness() const noexcept { return stiffness_; }
    const DenseMatrix& element_stiffness(std::size_t e) const { return element_stiffness_[e]; }
    const ElementMap& map(std::size_t e) const { return maps_[e]; }

    /// I^p(psi_a u_h) on every patch element: the exact degree p+1 product
    /// followed by lagrange_reduce.
    std::vector<BaryPoly> datum(std::span<const BaryPoly> uh) const;

    /// Galerkin right-hand side (grad_h f, grad v_i) for degree-p data f.
    Vector rhs(std::span<const BaryPoly> data) const;
    /// Patch coefficients of the minimizer for degree-p data.
    Vector solve(std::span<const BaryPoly> data) const;
    /// Elementwise polynomials of a patch coefficient vector.
    std::vector<BaryPoly> expand(std::span<const double> coeffs) const;

    /// s_a(u_h) as elementwise polynomials.
    std::vector<BaryPoly> reconstruct(std::span<const BaryPoly> uh) const { return expand(solve(datum(uh))); }

private:
    int p_;
    std::vector<int> center_local_;
    std::vector<ElementMap> maps_;
    std::vector<DenseMatrix> element_stiffness_;
    ConformingDofMap space_;
    DenseMatrix stiffness_;
    std::optional<CholeskyFactorization> factor_;
};

/// Divergence-free RT_p best approximation r of grad_h(psi_a u_h) on a patch,
/// from the saddle-point system over X = RT_p(T_a) with H(div) conformity and
/// Y = P_p(T_a). Flux unknowns on edges shared by two patch elements are
/// identified through the low-to-high orientation; boundary edges are free.
class FluxReconstruction {
public:
    FluxReconstruction(const Mesh& mesh, const VertexPatch& patch, int p);

    int degree() const noexcept { return p_; }
    std::size_t num_elements() const noexcept { return maps_.size(); }
    std::size_t num_flux_dofs() const noexcept { return nx_; }
    std::size_t num_multiplier_dofs() const noexcept { return ny_; }

    /// Mass matrix of X.
    const DenseMatrix& mass() const noexcept { return mass_; }
    /// B(y, x) = (div phi_x, q_y), Y basis = nodal P_p per element.
    const DenseMatrix& divergence() const noexcept { return div_; }

    /// (grad_h(psi_a u_h), phi_x) for every flux basis function.
    Vector rhs(std::span<const BaryPoly> uh) const;
    /// Flux coefficients of r_a(u_h).
    Vector solve(std::span<const BaryPoly> uh) const;
    /// Solves the saddle system for an arbitrary flux right-hand side.
    Vector solve_rhs(std::span<const double> flux_rhs) const;

    double norm(std::span<const double> r) const { return std::sqrt(std::max(0.0, quadratic_form(mass_, r))); }

    /// Point evaluation on patch element e.
    Vec2 value(std::span<const double> r, std::size_t e, const Bary& l) const;
    double divergence_at(std::span<const double> r, std::size_t e, const Bary& l) const;
    /// L2 norm of div r on every patch element.
    Vector elementwise_divergence_norms(std::span<const double> r) const;

    /// Global flux index and sign of local RT function j of patch element e.
    std::size_t flux_index(std::size_t e, std::size_t j) const { return x_index_[e][j]; }
    int flux_sign(std::size_t e, std::size_t j) const { return x_sign_[e][j]; }

private:
    int p_;
    int exactness_;
    std::vector<int> center_local_;
    std::vector<ElementMap> maps_;
    std::vector<std::vector<std::size_t>> x_index_;
    std::vector<std::vector<int>> x_sign_;
    std::size_t nx_ = 0;
    std::size_t ny_ = 0;
    DenseMatrix mass_;
    DenseMatrix div_;
    std::optional<LuFactorization> factor_;
};

} // namespace certiq
