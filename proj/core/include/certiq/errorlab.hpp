#pragma once

#include "certiq/constants.hpp"
#include "certiq/fields.hpp"
#include "certiq/mesh.hpp"

#include <optional>
#include <string>
#include <vector>

namespace certiq {

inline constexpr int kDefaultErrorExactness = 12;

/// sin(pi x) sin(pi y), zero on the boundary of (-1,1)^2.
FieldFunction smooth_function();
/// (1 - |x|) inside the unit disk, 0 outside.
FieldFunction circle_function();
/// (1 - r^2) r^{2/3} sin(2 theta / 3) inside the unit disk, 0 outside, where
/// theta = 0 on the positive x axis and 3 pi / 2 on the positive y axis.
FieldFunction lshape_function();
/// x^2 + y^2, with constant Hessian.
FieldFunction quadratic_bowl();

enum class MeshFamily { crisscross, graded };

struct BenchmarkCase {
    std::string name;
    Domain domain = Domain::square2;
    FieldFunction u;
    MeshFamily family = MeshFamily::crisscross;
    double h1_slope = 0.0;  ///< expected slope of log(error) against log(N)
    double h1_tolerance = 0.0;
    double l2_slope = 0.0;
    double l2_tolerance = 0.0;
};

/// smooth, circle, lshape, lshape_adapted.
std::vector<BenchmarkCase> benchmark_library();
/// Throws InvalidArgument for an unknown name.
BenchmarkCase find_benchmark(const std::string& name);

struct ErrorBreakdown {
    double total = 0.0;
    std::vector<double> per_element;
};

ErrorBreakdown h1_error(const ElementSource& u, const BrokenField& v, int exactness = kDefaultErrorExactness);
ErrorBreakdown l2_error(const ElementSource& u, const BrokenField& v, int exactness = kDefaultErrorExactness);
ErrorBreakdown h1_error(const FieldFunction& u, const BrokenField& v, int exactness = kDefaultErrorExactness);
ErrorBreakdown l2_error(const FieldFunction& u, const BrokenField& v, int exactness = kDefaultErrorExactness);

/// |grad(u - pi u)| per element as sqrt(|grad u|^2 - |grad pi u|^2), with
/// negative round-off clamped to zero.
ErrorBreakdown local_best_h1_error(const ElementSource& u, const BrokenField& pi_u,
                                   int exactness = kDefaultErrorExactness);

/// sqrt(sum_{K in T_a} e_K^2) for every vertex a.
std::vector<double> patch_norms(const Mesh& mesh, const std::vector<double>& per_element);

/// (1 + 9 c_Omega^2)^{1/2} |grad_h(u - pi u)|.
double eta_h1(const CertifiedConstants& constants, const ErrorBreakdown& local_best_error);
/// (1/(pi sqrt 3) + sqrt 3 c_Omega) (sum_a h_a^2 |grad_h(u - pi u)|_{omega_a}^2)^{1/2}.
double eta_l2(const Mesh& mesh, const CertifiedConstants& constants, const ErrorBreakdown& local_best_error);

struct LocalBounds {
    std::vector<double> h1;
    std::vector<double> l2;
};

/// Per-element certified bounds on |grad(u - J u)|_K and |u - J u|_K.
LocalBounds local_bounds(const Mesh& mesh, const CertifiedConstants& constants, const ErrorBreakdown& local_best_error);

/// Least-squares slope of log(err) against log(n) over the last `window` points.
double fit_slope(const std::vector<double>& n, const std::vector<double>& err, std::size_t window);
/// max(3, levels - 1), capped at `levels`.
std::size_t slope_window(std::size_t levels) noexcept;

struct StudyOptions {
    int degree = 1;
    int levels = 4;
    int error_exactness = kDefaultErrorExactness;
    int consistency_exactness = 16;
    int data_exactness = 0;  ///< <= 0 selects 2p + 8
    double cg_tol = 1e-10;
    double grading_const = 1.0;
    /// Level 0 mesh replacing the built-in family; finer levels are obtained by
    /// two rounds of uniform bisection each.
    std::optional<Mesh> base_mesh;
    /// Absolute slack for the guaranteed-bound audits.
    double bound_slack = 1e-8;
};

/// The mesh sequence of a case: criss-cross n = 5, 10, 20, ... on the square,
/// n = 6, 12, 24, ... on the L-shape, or graded bisection meshes.
std::vector<Mesh> benchmark_meshes(const BenchmarkCase& bench, const StudyOptions& options);

struct ApproxErrors {
    double lb = 0.0;  ///< local best
    double gb = 0.0;  ///< global best
    double qi = 0.0;  ///< quasi-interpolant J u
    double li = 0.0;  ///< Lagrange interpolant
};

struct ErrorReport {
    std::size_t level = 0;
    std::size_t nrdofs = 0;
    std::size_t num_elements = 0;
    double h_max = 0.0;
    ApproxErrors h1;
    ApproxErrors l2;
    double eta_h1 = 0.0;
    double eta_l2 = 0.0;
    double c_omega = 0.0;
    double effectivity_h1 = 0.0;
    double effectivity_l2 = 0.0;
    /// |H1(QI) at the consistency exactness - H1(QI) at the error exactness|.
    double quadrature_consistency = 0.0;
    std::size_t local_h1_violations = 0;
    std::size_t local_l2_violations = 0;
    bool bounds_hold = false;
};

struct StudyResult {
    std::string case_name;
    int degree = 1;
    std::vector<ErrorReport> rows;
    ApproxErrors h1_slopes;
    ApproxErrors l2_slopes;
    bool all_bounds_hold = false;
};

ErrorReport evaluate_level(const BenchmarkCase& bench, const Mesh& mesh, const StudyOptions& options);
StudyResult convergence_study(const BenchmarkCase& bench, const StudyOptions& options);

} // namespace certiq
