#pragma once

#include "certiq/linalg.hpp"
#include "certiq/mesh.hpp"

#include <iosfwd>
#include <vector>

namespace certiq {

/// 1 + (1/pi) max_{K in T_a} h_K / tau_K^a.
double rho_a(const Mesh& mesh, const VertexPatch& patch);

/// Matrices of the patch eigenproblem in the nodal basis of P_p(T_a):
///   D  coefficients of I^p(psi_a u_h) - s_a(u_h), column per basis function,
///   R  flux coefficients of r_a(u_h),
///   K  broken gradient Gram matrix of P_p(T_a) (block diagonal),
///   M  mass matrix of the flux space.
struct EigenAssembly {
    DenseMatrix d;
    DenseMatrix r;
    DenseMatrix k;
    DenseMatrix m;
};

EigenAssembly assemble_eigen_problem(const Mesh& mesh, const VertexPatch& patch, int p);

struct PatchLambda {
    double lambda = 0.0;  ///< sqrt of the largest pencil eigenvalue
    GenEigResult pencil;
};

/// Largest value of |grad_h(I(psi_a u_h) - s_a(u_h))| / |r_a(u_h)| over u_h,
/// from gen_eig_max(D^T K D, R^T M R).
PatchLambda lambda_a(const Mesh& mesh, const VertexPatch& patch, int p, const GenEigOptions& options = {});

struct CertifiedConstants {
    int degree = 1;
    std::vector<double> lambda;  ///< per vertex
    std::vector<double> rho;     ///< per vertex
    std::vector<double> c_k;     ///< per element, max of rho * lambda over its vertices
    double c_omega = 0.0;        ///< max over vertices of rho * lambda

    double rho_lambda(std::size_t a) const { return rho[a] * lambda[a]; }
};

/// Builds the per-element and global aggregates from per-vertex values.
CertifiedConstants aggregate(const Mesh& mesh, int p, std::vector<double> lambda, std::vector<double> rho);

/// Per-vertex eigenproblems in ascending vertex order, then aggregate().
CertifiedConstants compute_constants(const Mesh& mesh, int p, const GenEigOptions& options = {});

/// sqrt((s+1)!) (h/pi)^s, the factor in front of |v|_{H^{1+s}(K)} bounding
/// the local-best error. Requires 0 <= s <= p.
double local_best_factor(int s, double h, int p = 3);

/// CSV with header `vertex,boundary,rho,lambda,rho_lambda`, one row per vertex.
void write_constants_csv(std::ostream& out, const Mesh& mesh, const CertifiedConstants& constants);

} // namespace certiq
