#include "certiq/fields.hpp"

#include "certiq/error.hpp"
#include "certiq/lagrange.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <map>
#include <ostream>

namespace certiq {

std::vector<ElementMap> element_maps(const Mesh& mesh) {
    std::vector<ElementMap> maps;
    maps.reserve(mesh.num_triangles());
    for (std::size_t k = 0; k < mesh.num_triangles(); ++k) maps.push_back(element_map(mesh.triangle_points(k)));
    return maps;
}

DenseMatrix nodal_stiffness(const ElementMap& map, int p) {
    const LagrangeTable& tab = lagrange_table(p, std::max(1, 2 * p - 2));
    const std::size_t n = tab.basis->size();
    DenseMatrix g(n, n);
    std::vector<Vec2> grads(n);
    for (std::size_t q = 0; q < tab.rule->size(); ++q) {
        const double w = tab.rule->weights[q] * map.det;
        for (std::size_t i = 0; i < n; ++i) grads[i] = physical_gradient(tab.bary_grads[q][i], map.grad_lambda);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) g(i, j) += w * dot(grads[i], grads[j]);
    }
    return g;
}

DenseMatrix nodal_mass(const ElementMap& map, int p) {
    const LagrangeTable& tab = lagrange_table(p, 2 * p);
    const std::size_t n = tab.basis->size();
    DenseMatrix m(n, n);
    for (std::size_t q = 0; q < tab.rule->size(); ++q) {
        const double w = tab.rule->weights[q] * map.det;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) m(i, j) += w * tab.values[q][i] * tab.values[q][j];
    }
    return m;
}

Vector nodal_integrals(const ElementMap& map, int p) {
    const LagrangeTable& tab = lagrange_table(p, p);
    Vector out(tab.basis->size(), 0.0);
    for (std::size_t q = 0; q < tab.rule->size(); ++q)
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += tab.rule->weights[q] * map.det * tab.values[q][i];
    return out;
}

BrokenField::BrokenField(const Mesh& mesh, int p)
    : BrokenField(mesh, p, std::vector<BaryPoly>(mesh.num_triangles(), BaryPoly(p))) {}

BrokenField::BrokenField(const Mesh& mesh, int p, std::vector<BaryPoly> blocks)
    : mesh_(&mesh), p_(p), blocks_(std::move(blocks)), maps_(element_maps(mesh)) {
    if (blocks_.size() != mesh.num_triangles()) throw InvalidArgument("BrokenField: one block per element required");
    for (BaryPoly& b : blocks_) {
        if (b.degree() > p) throw InvalidArgument("BrokenField: block degree exceeds the field degree");
        if (b.degree() < p) b = b.elevated(p);
    }
}

void BrokenField::set_element(std::size_t k, BaryPoly poly) {
    if (poly.degree() > p_) throw InvalidArgument("BrokenField: block degree exceeds the field degree");
    blocks_[k] = poly.degree() < p_ ? poly.elevated(p_) : std::move(poly);
}

double BrokenField::value(std::size_t k, const Bary& l, const Point2&) const { return blocks_[k](l); }

Vec2 BrokenField::gradient(std::size_t k, const Bary& l, const Point2&) const {
    return physical_gradient(blocks_[k].bary_gradient(l), maps_[k].grad_lambda);
}

BrokenField& BrokenField::operator+=(const BrokenField& other) {
    if (other.mesh_ != mesh_ || other.p_ != p_) throw InvalidArgument("BrokenField: incompatible operands");
    for (std::size_t k = 0; k < blocks_.size(); ++k) blocks_[k] += other.blocks_[k];
    return *this;
}

BrokenField& BrokenField::operator*=(double s) {
    for (BaryPoly& b : blocks_) b *= s;
    return *this;
}

BrokenField operator-(const BrokenField& a, const BrokenField& b) {
    BrokenField out = b;
    out *= -1.0;
    out += a;
    return out;
}

ConformingDofMap::ConformingDofMap(const Mesh& mesh, std::vector<std::size_t> elements, int p)
    : p_(p), elements_(std::move(elements)) {
    const auto& lattice = multi_indices(p);
    const std::size_t dim = lattice.size();

    std::map<std::size_t, int> edge_use;
    for (std::size_t k : elements_)
        for (std::size_t e : mesh.triangle_edges(k)) ++edge_use[e];
    std::vector<std::uint8_t> vertex_constrained(mesh.num_vertices(), 0);
    for (const auto& [e, count] : edge_use) {
        if (count == 1) {
            vertex_constrained[mesh.edge(e).v[0]] = 1;
            vertex_constrained[mesh.edge(e).v[1]] = 1;
        }
    }

    // Node keys: (0, vertex, 0), (1, edge, multiplicity of the high vertex),
    // (2, element, lattice index).
    std::map<std::array<std::size_t, 3>, std::size_t> node_of_key;
    std::vector<std::uint8_t> constrained;
    element_nodes_.reserve(elements_.size() * dim);
    for (std::size_t k : elements_) {
        const Triangle& t = mesh.triangle(k);
        const auto pts = mesh.triangle_points(k);
        for (std::size_t i = 0; i < dim; ++i) {
            const MultiIndex& a = lattice[i];
            std::array<std::size_t, 3> node_key{};
            bool is_constrained = false;
            const int zeros = (a[0] == 0) + (a[1] == 0) + (a[2] == 0);
            if (zeros == 2) {
                const auto local = static_cast<std::size_t>(std::find(a.begin(), a.end(), p) - a.begin());
                node_key = {0, t[local], 0};
                is_constrained = vertex_constrained[t[local]] != 0;
            } else if (zeros == 1) {
                const auto opposite = static_cast<std::size_t>(std::find(a.begin(), a.end(), 0) - a.begin());
                const std::size_t e = mesh.triangle_edges(k)[opposite];
                const std::size_t u = (opposite + 1) % 3;
                const std::size_t w = (opposite + 2) % 3;
                const std::size_t high = t[u] > t[w] ? u : w;
                node_key = {1, e, static_cast<std::size_t>(a[high])};
                is_constrained = edge_use[e] == 1;
            } else {
                node_key = {2, k, i};
            }
            const auto [it, inserted] = node_of_key.try_emplace(node_key, node_points_.size());
            if (inserted) {
                const double inv = 1.0 / p;
                node_points_.push_back(a[0] * inv * pts[0] + a[1] * inv * pts[1] + a[2] * inv * pts[2]);
                constrained.push_back(is_constrained ? 1 : 0);
            }
            element_nodes_.push_back(it->second);
        }
    }

    node_dofs_.assign(node_points_.size(), kNone);
    for (std::size_t node = 0; node < node_points_.size(); ++node) {
        if (constrained[node]) continue;
        node_dofs_[node] = dof_nodes_.size();
        dof_nodes_.push_back(node);
    }
}

std::span<const std::size_t> ConformingDofMap::element_nodes(std::size_t e) const {
    const std::size_t dim = num_monomials(p_);
    return {element_nodes_.data() + e * dim, dim};
}

namespace {

std::vector<std::size_t> all_elements(const Mesh& mesh) {
    std::vector<std::size_t> out(mesh.num_triangles());
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = k;
    return out;
}

} // namespace

ConformingSpace::ConformingSpace(const Mesh& mesh, int p) : mesh_(&mesh), map_(mesh, all_elements(mesh), p) {}

ConformingField::ConformingField(const ConformingSpace& space, Vector coeffs)
    : space_(&space), coeffs_(std::move(coeffs)) {
    if (coeffs_.size() != space.num_dofs()) throw InvalidArgument("ConformingField: coefficient count mismatch");
}

Vector ConformingField::node_values() const {
    const ConformingDofMap& map = space_->dof_map();
    Vector out(map.num_nodes(), 0.0);
    for (std::size_t d = 0; d < map.num_dofs(); ++d) out[map.dof_node(d)] = coeffs_[d];
    return out;
}

BrokenField ConformingField::to_broken() const {
    const ConformingDofMap& map = space_->dof_map();
    const LagrangeBasis& basis = p_basis(map.degree());
    const Vector nodes = node_values();
    std::vector<BaryPoly> blocks;
    blocks.reserve(map.elements().size());
    Vector local(basis.size());
    for (std::size_t e = 0; e < map.elements().size(); ++e) {
        const auto ids = map.element_nodes(e);
        for (std::size_t i = 0; i < ids.size(); ++i) local[i] = nodes[ids[i]];
        blocks.push_back(basis.from_nodal(local));
    }
    return BrokenField(space_->mesh(), map.degree(), std::move(blocks));
}

SparseMatrix stiffness_matrix(const ConformingSpace& space) {
    const ConformingDofMap& map = space.dof_map();
    const Mesh& mesh = space.mesh();
    std::vector<SparseMatrix::Triplet> triplets;
    for (std::size_t e = 0; e < map.elements().size(); ++e) {
        const DenseMatrix g = nodal_stiffness(element_map(mesh.triangle_points(map.elements()[e])), map.degree());
        const auto ids = map.element_nodes(e);
        for (std::size_t i = 0; i < ids.size(); ++i) {
            const std::size_t di = map.node_dof(ids[i]);
            if (di == kNone) continue;
            for (std::size_t j = 0; j < ids.size(); ++j) {
                const std::size_t dj = map.node_dof(ids[j]);
                if (dj != kNone) triplets.push_back({di, dj, g(i, j)});
            }
        }
    }
    return SparseMatrix::from_triplets(map.num_dofs(), map.num_dofs(), std::move(triplets), true);
}

void write_field_csv(std::ostream& out, const ConformingField& field) {
    const ConformingDofMap& map = field.space().dof_map();
    const Vector values = field.node_values();
    const auto precision = out.precision(std::numeric_limits<double>::max_digits10);
    out << "node,x,y,value\n";
    for (std::size_t n = 0; n < map.num_nodes(); ++n) {
        const Point2& x = map.node_point(n);
        out << n << ',' << x.x << ',' << x.y << ',' << values[n] << '\n';
    }
    out.precision(precision);
}

} // namespace certiq
