#pragma once

#include "certiq/element_map.hpp"
#include "certiq/linalg.hpp"
#include "certiq/mesh.hpp"
#include "certiq/polynomial.hpp"

#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace certiq {

/// Analytic target function. `hessian` and `kink_distance` may be empty.
struct FieldFunction {
    std::string name;
    std::function<double(const Point2&)> value;
    std::function<Vec2(const Point2&)> gradient;
    std::function<Hessian2(const Point2&)> hessian;
    /// Distance to the set where the function is not smooth.
    std::function<double(const Point2&)> kink_distance;
};

/// Anything that can be integrated elementwise: analytic functions, or
/// piecewise polynomial fields evaluated on their own elements so that
/// traces are never ambiguous.
class ElementSource {
public:
    virtual ~ElementSource() = default;
    virtual double value(std::size_t element, const Bary& l, const Point2& x) const = 0;
    virtual Vec2 gradient(std::size_t element, const Bary& l, const Point2& x) const = 0;
};

class FunctionSource final : public ElementSource {
public:
    explicit FunctionSource(const FieldFunction& f) : f_(f) {}
    double value(std::size_t, const Bary&, const Point2& x) const override { return f_.value(x); }
    Vec2 gradient(std::size_t, const Bary&, const Point2& x) const override { return f_.gradient(x); }

private:
    const FieldFunction& f_;
};

std::vector<ElementMap> element_maps(const Mesh& mesh);

/// Element matrices of the degree-p nodal basis on one element.
DenseMatrix nodal_stiffness(const ElementMap& map, int p);
DenseMatrix nodal_mass(const ElementMap& map, int p);
Vector nodal_integrals(const ElementMap& map, int p);

/// Elementwise P_p field with one barycentric block per element. Holds a
/// reference to the mesh, which must outlive it.
class BrokenField final : public ElementSource {
public:
    BrokenField(const Mesh& mesh, int p);
    BrokenField(const Mesh& mesh, int p, std::vector<BaryPoly> blocks);

    const Mesh& mesh() const noexcept { return *mesh_; }
    int degree() const noexcept { return p_; }
    std::size_t num_elements() const noexcept { return blocks_.size(); }

    const BaryPoly& element(std::size_t k) const { return blocks_[k]; }
    void set_element(std::size_t k, BaryPoly poly);
    const std::vector<BaryPoly>& blocks() const noexcept { return blocks_; }
    const ElementMap& map(std::size_t k) const { return maps_[k]; }

    double value(std::size_t k, const Bary& l, const Point2& x) const override;
    Vec2 gradient(std::size_t k, const Bary& l, const Point2& x) const override;

    BrokenField& operator+=(const BrokenField& other);
    BrokenField& operator*=(double s);

private:
    const Mesh* mesh_;
    int p_;
    std::vector<BaryPoly> blocks_;
    std::vector<ElementMap> maps_;
};

BrokenField operator-(const BrokenField& a, const BrokenField& b);

/// Lagrange nodes of P_p over a subset of elements with shared nodes
/// identified. Nodes on edges used by only one element of the subset (and
/// vertices touching such edges) carry no degree of freedom. With the whole
/// mesh this is P_p(T_h) with zero trace on the boundary; with a vertex patch
/// it is P_p(T_a) with zero trace on the patch boundary.
class ConformingDofMap {
public:
    ConformingDofMap(const Mesh& mesh, std::vector<std::size_t> elements, int p);

    int degree() const noexcept { return p_; }
    std::size_t num_nodes() const noexcept { return node_points_.size(); }
    std::size_t num_dofs() const noexcept { return dof_nodes_.size(); }
    const std::vector<std::size_t>& elements() const noexcept { return elements_; }

    /// Node ids of the lattice nodes of the e-th subset element.
    std::span<const std::size_t> element_nodes(std::size_t e) const;
    /// Dof id of a node, or kNone for a constrained node.
    std::size_t node_dof(std::size_t node) const { return node_dofs_[node]; }
    std::size_t dof_node(std::size_t dof) const { return dof_nodes_[dof]; }
    const Point2& node_point(std::size_t node) const { return node_points_[node]; }

private:
    int p_;
    std::vector<std::size_t> elements_;
    std::vector<std::size_t> element_nodes_;  // flattened, dim P_p per element
    std::vector<std::size_t> node_dofs_;
    std::vector<std::size_t> dof_nodes_;
    std::vector<Point2> node_points_;
};

/// P_p(T_h) intersected with H^1_0(Omega). Keeps a reference to the mesh.
class ConformingSpace {
public:
    ConformingSpace(const Mesh& mesh, int p);

    const Mesh& mesh() const noexcept { return *mesh_; }
    int degree() const noexcept { return map_.degree(); }
    std::size_t num_dofs() const noexcept { return map_.num_dofs(); }
    const ConformingDofMap& dof_map() const noexcept { return map_; }

private:
    const Mesh* mesh_;
    ConformingDofMap map_;
};

/// Coefficients over a ConformingSpace; the space must outlive the field.
class ConformingField {
public:
    explicit ConformingField(const ConformingSpace& space) : space_(&space), coeffs_(space.num_dofs(), 0.0) {}
    ConformingField(const ConformingSpace& space, Vector coeffs);

    const ConformingSpace& space() const noexcept { return *space_; }
    const Vector& coefficients() const noexcept { return coeffs_; }
    Vector& coefficients() noexcept { return coeffs_; }

    /// Value at every Lagrange node (zero on constrained nodes).
    Vector node_values() const;
    BrokenField to_broken() const;

private:
    const ConformingSpace* space_;
    Vector coeffs_;
};

/// Global stiffness matrix of the conforming space.
SparseMatrix stiffness_matrix(const ConformingSpace& space);

/// CSV with header `node,x,y,value`, one row per Lagrange node.
void write_field_csv(std::ostream& out, const ConformingField& field);

} // namespace certiq
