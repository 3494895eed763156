#include "certiq/errorlab.hpp"

#include "certiq/error.hpp"
#include "certiq/quadrature.hpp"
#include "certiq/quasinterp.hpp"
#include "certiq/reconstruct.hpp"
#include "certiq/refine.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace certiq {

namespace {

constexpr double kPi = std::numbers::pi;

double radial_kink_distance(const Point2& x) {
    const double r = norm(x);
    return std::min(r, std::abs(r - 1.0));
}

} // namespace

FieldFunction smooth_function() {
    FieldFunction f;
    f.name = "smooth";
    f.value = [](const Point2& x) { return std::sin(kPi * x.x) * std::sin(kPi * x.y); };
    f.gradient = [](const Point2& x) {
        return Vec2{kPi * std::cos(kPi * x.x) * std::sin(kPi * x.y), kPi * std::sin(kPi * x.x) * std::cos(kPi * x.y)};
    };
    f.hessian = [](const Point2& x) {
        const double s = std::sin(kPi * x.x) * std::sin(kPi * x.y);
        return Hessian2{-kPi * kPi * s, kPi * kPi * std::cos(kPi * x.x) * std::cos(kPi * x.y), -kPi * kPi * s};
    };
    return f;
}

FieldFunction circle_function() {
    FieldFunction f;
    f.name = "circle";
    f.value = [](const Point2& x) { return std::max(0.0, 1.0 - norm(x)); };
    f.gradient = [](const Point2& x) {
        const double r = norm(x);
        if (r >= 1.0 || r == 0.0) return Vec2{};
        return Vec2{-x.x / r, -x.y / r};
    };
    f.hessian = [](const Point2& x) {
        const double r = norm(x);
        if (r >= 1.0 || r == 0.0) return Hessian2{};
        const double c = x.x / r;
        const double s = x.y / r;
        return Hessian2{-(1.0 - c * c) / r, c * s / r, -(1.0 - s * s) / r};
    };
    f.kink_distance = radial_kink_distance;
    return f;
}

FieldFunction lshape_function() {
    // u = f(r) g(theta), f = r^{2/3} - r^{8/3}, g = sin(2 theta / 3), theta = -phi mod 2 pi.
    struct Polar {
        double r, c, s, theta;
    };
    const auto polar = [](const Point2& x) {
        const double r = norm(x);
        double theta = std::fmod(-std::atan2(x.y, x.x), 2.0 * kPi);
        if (theta < 0.0) theta += 2.0 * kPi;
        return Polar{r, x.x / r, x.y / r, theta};
    };
    FieldFunction f;
    f.name = "lshape";
    f.value = [polar](const Point2& x) {
        const double r = norm(x);
        if (r >= 1.0 || r == 0.0) return 0.0;
        const Polar p = polar(x);
        return (1.0 - r * r) * std::cbrt(r * r) * std::sin(2.0 * p.theta / 3.0);
    };
    f.gradient = [polar](const Point2& x) {
        const double r = norm(x);
        if (r >= 1.0 || r == 0.0) return Vec2{};
        const Polar p = polar(x);
        const double fr = std::cbrt(r * r) - std::pow(r, 8.0 / 3.0);
        const double dfr = (2.0 / 3.0) / std::cbrt(r) - (8.0 / 3.0) * std::pow(r, 5.0 / 3.0);
        const double g = std::sin(2.0 * p.theta / 3.0);
        const double dg = (2.0 / 3.0) * std::cos(2.0 * p.theta / 3.0);
        // grad theta = (y, -x) / r^2, a unit vector over r.
        return Vec2{dfr * g * p.c + fr * dg * p.s / r, dfr * g * p.s - fr * dg * p.c / r};
    };
    f.hessian = [polar](const Point2& x) {
        const double r = norm(x);
        if (r >= 1.0 || r == 0.0) return Hessian2{};
        const Polar p = polar(x);
        const double fr = std::cbrt(r * r) - std::pow(r, 8.0 / 3.0);
        const double dfr = (2.0 / 3.0) / std::cbrt(r) - (8.0 / 3.0) * std::pow(r, 5.0 / 3.0);
        const double d2fr = -(2.0 / 9.0) * std::pow(r, -4.0 / 3.0) - (40.0 / 9.0) * std::cbrt(r * r);
        const double g = std::sin(2.0 * p.theta / 3.0);
        const double dg = (2.0 / 3.0) * std::cos(2.0 * p.theta / 3.0);
        const double d2g = -(4.0 / 9.0) * g;
        // In the standard angle phi = -theta: G_phi = -F_theta, G_phiphi = F_thetatheta, G_rphi = -F_rtheta.
        const double g_rr = d2fr * g;
        const double g_p = -fr * dg;
        const double g_pp = fr * d2g;
        const double g_rp = -dfr * dg;
        const double h_rr = g_rr;
        const double h_rp = g_rp / r - g_p / (r * r);
        const double h_pp = dfr * g / r + g_pp / (r * r);
        // e_r = (c, s), e_phi = (-s, c).
        const double c = p.c;
        const double s = p.s;
        return Hessian2{h_rr * c * c - 2.0 * h_rp * c * s + h_pp * s * s,
                        h_rr * c * s + h_rp * (c * c - s * s) - h_pp * c * s,
                        h_rr * s * s + 2.0 * h_rp * c * s + h_pp * c * c};
    };
    f.kink_distance = radial_kink_distance;
    return f;
}

FieldFunction quadratic_bowl() {
    FieldFunction f;
    f.name = "bowl";
    f.value = [](const Point2& x) { return x.x * x.x + x.y * x.y; };
    f.gradient = [](const Point2& x) { return Vec2{2.0 * x.x, 2.0 * x.y}; };
    f.hessian = [](const Point2&) { return Hessian2{2.0, 0.0, 2.0}; };
    return f;
}

std::vector<BenchmarkCase> benchmark_library() {
    return {
        {"smooth", Domain::square2, smooth_function(), MeshFamily::crisscross, -0.5, 0.05, -1.0, 0.07},
        {"circle", Domain::square2, circle_function(), MeshFamily::crisscross, -0.25, 0.05, -0.75, 0.07},
        {"lshape", Domain::lshape, lshape_function(), MeshFamily::crisscross, -1.0 / 3.0, 0.05, -5.0 / 6.0, 0.07},
        {"lshape_adapted", Domain::lshape, lshape_function(), MeshFamily::graded, -0.5, 0.07, -1.0, 0.1},
    };
}

BenchmarkCase find_benchmark(const std::string& name) {
    for (BenchmarkCase& c : benchmark_library())
        if (c.name == name) return c;
    throw InvalidArgument("unknown benchmark case '" + name + "' (expected smooth, circle, lshape, lshape_adapted)");
}

namespace {

template <typename Integrand>
ErrorBreakdown integrate_squared(const Mesh& mesh, int exactness, Integrand&& integrand) {
    const QuadratureRule& rule = quad_rule(exactness);
    ErrorBreakdown out;
    out.per_element.resize(mesh.num_triangles());
    double total = 0.0;
    for (std::size_t k = 0; k < mesh.num_triangles(); ++k) {
        const ElementMap map = element_map(mesh.triangle_points(k));
        double sum = 0.0;
        for (std::size_t q = 0; q < rule.size(); ++q)
            sum += rule.weights[q] * map.det * integrand(k, map, rule.points[q], map.point(rule.points[q]));
        out.per_element[k] = std::sqrt(std::max(0.0, sum));
        total += std::max(0.0, sum);
    }
    out.total = std::sqrt(total);
    return out;
}

} // namespace

ErrorBreakdown h1_error(const ElementSource& u, const BrokenField& v, int exactness) {
    return integrate_squared(v.mesh(), exactness, [&](std::size_t k, const ElementMap&, const Bary& l, const Point2& x) {
        const Vec2 d = u.gradient(k, l, x) - v.gradient(k, l, x);
        return dot(d, d);
    });
}

ErrorBreakdown l2_error(const ElementSource& u, const BrokenField& v, int exactness) {
    return integrate_squared(v.mesh(), exactness, [&](std::size_t k, const ElementMap&, const Bary& l, const Point2& x) {
        const double d = u.value(k, l, x) - v.value(k, l, x);
        return d * d;
    });
}

ErrorBreakdown h1_error(const FieldFunction& u, const BrokenField& v, int exactness) {
    return h1_error(FunctionSource(u), v, exactness);
}

ErrorBreakdown l2_error(const FieldFunction& u, const BrokenField& v, int exactness) {
    return l2_error(FunctionSource(u), v, exactness);
}

ErrorBreakdown local_best_h1_error(const ElementSource& u, const BrokenField& pi_u, int exactness) {
    return integrate_squared(pi_u.mesh(), exactness,
                             [&](std::size_t k, const ElementMap&, const Bary& l, const Point2& x) {
                                 const Vec2 gu = u.gradient(k, l, x);
                                 const Vec2 gp = pi_u.gradient(k, l, x);
                                 return dot(gu, gu) - dot(gp, gp);
                             });
}

std::vector<double> patch_norms(const Mesh& mesh, const std::vector<double>& per_element) {
    std::vector<double> out(mesh.num_vertices(), 0.0);
    for (std::size_t k = 0; k < mesh.num_triangles(); ++k)
        for (std::size_t v : mesh.triangle(k)) out[v] += per_element[k] * per_element[k];
    for (double& x : out) x = std::sqrt(x);
    return out;
}

double eta_h1(const CertifiedConstants& c, const ErrorBreakdown& lb) {
    constexpr double d = 2.0;
    return std::sqrt(1.0 + (d + 1.0) * (d + 1.0) * c.c_omega * c.c_omega) * lb.total;
}

double eta_l2(const Mesh& mesh, const CertifiedConstants& c, const ErrorBreakdown& lb) {
    constexpr double d = 2.0;
    const std::vector<double> patch = patch_norms(mesh, lb.per_element);
    double sum = 0.0;
    for (std::size_t a = 0; a < mesh.num_vertices(); ++a) {
        const double h_a = vertex_patch(mesh, a).h_a;
        sum += h_a * h_a * patch[a] * patch[a];
    }
    const double factor = 1.0 / (kPi * std::sqrt(d + 1.0)) + (2.0 / d) * std::sqrt(d + 1.0) * c.c_omega;
    return factor * std::sqrt(sum);
}

LocalBounds local_bounds(const Mesh& mesh, const CertifiedConstants& c, const ErrorBreakdown& lb) {
    constexpr double d = 2.0;
    const std::vector<double> patch = patch_norms(mesh, lb.per_element);
    std::vector<double> h_a(mesh.num_vertices());
    for (std::size_t a = 0; a < mesh.num_vertices(); ++a) h_a[a] = vertex_patch(mesh, a).h_a;
    LocalBounds out;
    out.h1.resize(mesh.num_triangles());
    out.l2.resize(mesh.num_triangles());
    for (std::size_t k = 0; k < mesh.num_triangles(); ++k) {
        double sum_h1 = 0.0;
        double sum_l2 = 0.0;
        for (std::size_t a : mesh.triangle(k)) {
            sum_h1 += c.rho_lambda(a) * patch[a];
            sum_l2 += c.rho_lambda(a) * h_a[a] * patch[a];
        }
        const double e = lb.per_element[k];
        out.h1[k] = std::sqrt(e * e + sum_h1 * sum_h1);
        out.l2[k] = element_geometry(mesh, k).h / kPi * e + (2.0 / d) * sum_l2;
    }
    return out;
}

double fit_slope(const std::vector<double>& n, const std::vector<double>& err, std::size_t window) {
    if (n.size() != err.size() || window < 2 || window > n.size())
        throw InvalidArgument("fit_slope: need at least two points inside the data");
    const std::size_t first = n.size() - window;
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = first; i < n.size(); ++i) {
        const double x = std::log(n[i]);
        const double y = std::log(err[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double m = static_cast<double>(window);
    return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

std::size_t slope_window(std::size_t levels) noexcept {
    return std::min(levels, std::max<std::size_t>(3, levels > 0 ? levels - 1 : 0));
}

std::vector<Mesh> benchmark_meshes(const BenchmarkCase& bench, const StudyOptions& options) {
    if (options.levels < 1) throw InvalidArgument("benchmark_meshes: need at least one level");
    std::vector<Mesh> meshes;
    if (options.base_mesh) {
        meshes.push_back(*options.base_mesh);
        for (int l = 1; l < options.levels; ++l) meshes.push_back(bisect_uniform(meshes.back(), 2));
        return meshes;
    }
    if (bench.family == MeshFamily::crisscross) {
        const int n0 = bench.domain == Domain::lshape ? 6 : 5;
        for (int l = 0; l < options.levels; ++l) meshes.push_back(build_crisscross(n0 << l, bench.domain));
        return meshes;
    }
    const Mesh base = build_crisscross(2, bench.domain);
    for (int l = 0; l < options.levels; ++l) {
        const double h = 0.5 * std::pow(0.5, l);
        meshes.push_back(refine_graded(base, corner_grading(h, options.grading_const)));
    }
    return meshes;
}

ErrorReport evaluate_level(const BenchmarkCase& bench, const Mesh& mesh, const StudyOptions& options) {
    const int p = options.degree;
    const FunctionSource u(bench.u);
    const ConformingSpace space(mesh, p);

    ErrorReport row;
    row.nrdofs = space.num_dofs();
    row.num_elements = mesh.num_triangles();
    for (std::size_t k = 0; k < mesh.num_triangles(); ++k) row.h_max = std::max(row.h_max, element_geometry(mesh, k).h);

    const BrokenField pi_u = local_best(u, mesh, p, options.data_exactness);
    const ConformingField qi = quasi_interpolate_broken(pi_u, space);
    const ConformingField gb = global_best(u, space, options.cg_tol, options.data_exactness);
    const ConformingField li = nodal_interpolant(bench.u, space);
    const BrokenField qi_b = qi.to_broken();
    const BrokenField gb_b = gb.to_broken();
    const BrokenField li_b = li.to_broken();

    const ErrorBreakdown lb_h1 = local_best_h1_error(u, pi_u, options.error_exactness);
    const ErrorBreakdown qi_h1 = h1_error(u, qi_b, options.error_exactness);
    const ErrorBreakdown qi_l2 = l2_error(u, qi_b, options.error_exactness);
    row.h1 = {lb_h1.total, h1_error(u, gb_b, options.error_exactness).total, qi_h1.total,
              h1_error(u, li_b, options.error_exactness).total};
    row.l2 = {l2_error(u, pi_u, options.error_exactness).total, l2_error(u, gb_b, options.error_exactness).total,
              qi_l2.total, l2_error(u, li_b, options.error_exactness).total};
    row.quadrature_consistency = std::abs(h1_error(u, qi_b, options.consistency_exactness).total - qi_h1.total);

    const CertifiedConstants constants = compute_constants(mesh, p);
    row.c_omega = constants.c_omega;
    row.eta_h1 = eta_h1(constants, lb_h1);
    row.eta_l2 = eta_l2(mesh, constants, lb_h1);
    row.effectivity_h1 = row.eta_h1 / row.h1.qi;
    row.effectivity_l2 = row.eta_l2 / row.l2.qi;

    const LocalBounds local = local_bounds(mesh, constants, lb_h1);
    for (std::size_t k = 0; k < mesh.num_triangles(); ++k) {
        if (qi_h1.per_element[k] > local.h1[k] + options.bound_slack) ++row.local_h1_violations;
        if (qi_l2.per_element[k] > local.l2[k] + options.bound_slack) ++row.local_l2_violations;
    }
    row.bounds_hold = row.h1.qi <= row.eta_h1 + options.bound_slack && row.l2.qi <= row.eta_l2 + options.bound_slack &&
                      row.local_h1_violations == 0 && row.local_l2_violations == 0;
    return row;
}

StudyResult convergence_study(const BenchmarkCase& bench, const StudyOptions& options) {
    if (options.levels < 2) throw InvalidArgument("convergence_study: need at least two levels");
    StudyResult result;
    result.case_name = bench.name;
    result.degree = options.degree;
    const std::vector<Mesh> meshes = benchmark_meshes(bench, options);
    for (std::size_t l = 0; l < meshes.size(); ++l) {
        ErrorReport row = evaluate_level(bench, meshes[l], options);
        row.level = l;
        result.rows.push_back(row);
    }
    std::vector<double> n;
    std::vector<std::vector<double>> series(8);
    for (const ErrorReport& r : result.rows) {
        n.push_back(static_cast<double>(r.nrdofs));
        const double values[8] = {r.h1.lb, r.h1.gb, r.h1.qi, r.h1.li, r.l2.lb, r.l2.gb, r.l2.qi, r.l2.li};
        for (std::size_t i = 0; i < 8; ++i) series[i].push_back(values[i]);
    }
    const std::size_t window = slope_window(n.size());
    const auto slope = [&](std::size_t i) { return fit_slope(n, series[i], window); };
    result.h1_slopes = {slope(0), slope(1), slope(2), slope(3)};
    result.l2_slopes = {slope(4), slope(5), slope(6), slope(7)};
    result.all_bounds_hold =
        std::all_of(result.rows.begin(), result.rows.end(), [](const ErrorReport& r) { return r.bounds_hold; });
    return result;
}

} // namespace certiq
