#include "certiq/quasinterp.hpp"

#include "certiq/error.hpp"
#include "certiq/lagrange.hpp"
#include "certiq/reconstruct.hpp"

namespace certiq {

ConformingField quasi_interpolate_broken(const BrokenField& pi_u, const ConformingSpace& space) {
    const Mesh& mesh = space.mesh();
    if (&pi_u.mesh() != &mesh) throw InvalidArgument("quasi_interpolate: field and space use different meshes");
    if (pi_u.degree() != space.degree()) throw InvalidArgument("quasi_interpolate: degree mismatch");
    const int p = space.degree();
    const ConformingDofMap& global = space.dof_map();

    // Global node of (element, lattice index).
    std::vector<std::size_t> first(mesh.num_triangles());
    for (std::size_t e = 0; e < global.elements().size(); ++e) first[global.elements()[e]] = e;

    ConformingField out(space);
    Vector& c = out.coefficients();
    for (std::size_t a = 0; a < mesh.num_vertices(); ++a) {
        const VertexPatch patch = vertex_patch(mesh, a);
        const PotentialReconstruction potential(mesh, patch, p);
        if (potential.num_dofs() == 0) continue;
        const Vector s = potential.solve(potential.datum(restrict_to_patch(pi_u, patch)));
        const ConformingDofMap& local = potential.space();
        std::vector<std::uint8_t> done(local.num_dofs(), 0);
        for (std::size_t e = 0; e < patch.elements.size(); ++e) {
            const auto local_nodes = local.element_nodes(e);
            const auto global_nodes = global.element_nodes(first[patch.elements[e]]);
            for (std::size_t i = 0; i < local_nodes.size(); ++i) {
                const std::size_t ld = local.node_dof(local_nodes[i]);
                if (ld == kNone || done[ld]) continue;
                done[ld] = 1;
                const std::size_t gd = global.node_dof(global_nodes[i]);
                if (gd == kNone) throw AssemblyError("quasi_interpolate: patch dof on the domain boundary");
                c[gd] += s[ld];
            }
        }
    }
    return out;
}

ConformingField quasi_interpolate(const ElementSource& u, const ConformingSpace& space, int exactness) {
    return quasi_interpolate_broken(local_best(u, space.mesh(), space.degree(), exactness), space);
}

ConformingField quasi_interpolate(const FieldFunction& u, const ConformingSpace& space, int exactness) {
    return quasi_interpolate(FunctionSource(u), space, exactness);
}

ConformingField global_best(const ElementSource& u, const ConformingSpace& space, double rel_tol, int exactness) {
    const int p = space.degree();
    if (exactness <= 0) exactness = default_data_exactness(p);
    const Mesh& mesh = space.mesh();
    const ConformingDofMap& map = space.dof_map();
    const LagrangeTable& tab = lagrange_table(p, exactness);
    Vector b(map.num_dofs(), 0.0);
    for (std::size_t e = 0; e < map.elements().size(); ++e) {
        const std::size_t k = map.elements()[e];
        const ElementMap em = element_map(mesh.triangle_points(k));
        const auto nodes = map.element_nodes(e);
        for (std::size_t q = 0; q < tab.rule->size(); ++q) {
            const Bary& l = tab.rule->points[q];
            const double w = tab.rule->weights[q] * em.det;
            const Vec2 du = u.gradient(k, l, em.point(l));
            for (std::size_t i = 0; i < nodes.size(); ++i) {
                const std::size_t d = map.node_dof(nodes[i]);
                if (d != kNone) b[d] += w * dot(du, physical_gradient(tab.bary_grads[q][i], em.grad_lambda));
            }
        }
    }
    if (map.num_dofs() == 0) return ConformingField(space);
    if (norm2(b) == 0.0) return ConformingField(space);
    const CgResult cg = cg_solve(stiffness_matrix(space), b, rel_tol);
    return ConformingField(space, cg.x);
}

ConformingField global_best(const FieldFunction& u, const ConformingSpace& space, double rel_tol, int exactness) {
    return global_best(FunctionSource(u), space, rel_tol, exactness);
}

ConformingField nodal_interpolant(const FieldFunction& u, const ConformingSpace& space) {
    const ConformingDofMap& map = space.dof_map();
    ConformingField out(space);
    for (std::size_t d = 0; d < map.num_dofs(); ++d) out.coefficients()[d] = u.value(map.node_point(map.dof_node(d)));
    return out;
}

} // namespace certiq
