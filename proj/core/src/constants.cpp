#include "certiq/constants.hpp"

#include "certiq/error.hpp"
#include "certiq/fields.hpp"
#include "certiq/lagrange.hpp"
#include "certiq/reconstruct.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <string>

namespace certiq {

double rho_a(const Mesh& mesh, const VertexPatch& patch) {
    double worst = 0.0;
    for (std::size_t e = 0; e < patch.elements.size(); ++e) {
        const ElementGeometry g = element_geometry(mesh, patch.elements[e]);
        worst = std::max(worst, g.h / g.tau[static_cast<std::size_t>(patch.center_local_index[e])]);
    }
    return 1.0 + worst / std::numbers::pi;
}

EigenAssembly assemble_eigen_problem(const Mesh& mesh, const VertexPatch& patch, int p) {
    const PotentialReconstruction potential(mesh, patch, p);
    const FluxReconstruction flux(mesh, patch, p);
    const LagrangeBasis& basis = p_basis(p);
    const std::size_t dim = basis.size();
    const std::size_t ne = patch.elements.size();
    const std::size_t nu = ne * dim;

    EigenAssembly out;
    out.d = DenseMatrix(nu, nu);
    out.r = DenseMatrix(flux.num_flux_dofs(), nu);
    out.k = DenseMatrix(nu, nu);
    out.m = flux.mass();
    for (std::size_t e = 0; e < ne; ++e) {
        const DenseMatrix& g = potential.element_stiffness(e);
        for (std::size_t i = 0; i < dim; ++i)
            for (std::size_t j = 0; j < dim; ++j) out.k(e * dim + i, e * dim + j) = g(i, j);
    }

    std::vector<BaryPoly> uh(ne, BaryPoly(p));
    for (std::size_t e = 0; e < ne; ++e) {
        for (std::size_t j = 0; j < dim; ++j) {
            const std::size_t col = e * dim + j;
            uh[e] = basis.function(j);
            const std::vector<BaryPoly> data = potential.datum(uh);
            const std::vector<BaryPoly> s = potential.expand(potential.solve(data));
            for (std::size_t f = 0; f < ne; ++f) {
                const Vector values = basis.to_nodal(data[f] - s[f]);
                for (std::size_t i = 0; i < dim; ++i) out.d(f * dim + i, col) = values[i];
            }
            out.r.set_column(col, flux.solve(uh));
            uh[e] = BaryPoly(p);
        }
    }
    return out;
}

PatchLambda lambda_a(const Mesh& mesh, const VertexPatch& patch, int p, const GenEigOptions& options) {
    const EigenAssembly ea = assemble_eigen_problem(mesh, patch, p);
    PatchLambda out;
    try {
        out.pencil = gen_eig_max(congruence(ea.d, ea.k), congruence(ea.r, ea.m), options);
    } catch (const QuotientUnboundedError& e) {
        throw QuotientUnboundedError("lambda_a at vertex " + std::to_string(patch.center) + ": " + e.what());
    }
    out.lambda = std::sqrt(std::max(0.0, out.pencil.mu_max));
    return out;
}

CertifiedConstants aggregate(const Mesh& mesh, int p, std::vector<double> lambda, std::vector<double> rho) {
    if (lambda.size() != mesh.num_vertices() || rho.size() != mesh.num_vertices())
        throw InvalidArgument("aggregate: one lambda and one rho per vertex required");
    CertifiedConstants c;
    c.degree = p;
    c.lambda = std::move(lambda);
    c.rho = std::move(rho);
    c.c_k.assign(mesh.num_triangles(), 0.0);
    for (std::size_t k = 0; k < mesh.num_triangles(); ++k)
        for (std::size_t v : mesh.triangle(k)) c.c_k[k] = std::max(c.c_k[k], c.rho_lambda(v));
    for (std::size_t a = 0; a < mesh.num_vertices(); ++a) c.c_omega = std::max(c.c_omega, c.rho_lambda(a));
    return c;
}

CertifiedConstants compute_constants(const Mesh& mesh, int p, const GenEigOptions& options) {
    std::vector<double> lambda(mesh.num_vertices());
    std::vector<double> rho(mesh.num_vertices());
    for (std::size_t a = 0; a < mesh.num_vertices(); ++a) {
        const VertexPatch patch = vertex_patch(mesh, a);
        lambda[a] = lambda_a(mesh, patch, p, options).lambda;
        rho[a] = rho_a(mesh, patch);
    }
    return aggregate(mesh, p, std::move(lambda), std::move(rho));
}

double local_best_factor(int s, double h, int p) {
    if (s < 0 || s > p) throw InvalidArgument("local_best_factor: need 0 <= s <= p");
    double fact = 1.0;
    for (int i = 2; i <= s + 1; ++i) fact *= i;
    return std::sqrt(fact) * std::pow(h / std::numbers::pi, s);
}

void write_constants_csv(std::ostream& out, const Mesh& mesh, const CertifiedConstants& c) {
    const auto precision = out.precision(std::numeric_limits<double>::max_digits10);
    out << "vertex,boundary,rho,lambda,rho_lambda\n";
    for (std::size_t a = 0; a < mesh.num_vertices(); ++a) {
        out << a << ',' << (mesh.is_boundary_vertex(a) ? 1 : 0) << ',' << c.rho[a] << ',' << c.lambda[a] << ','
            << c.rho_lambda(a) << '\n';
    }
    out.precision(precision);
}

} // namespace certiq
