#include "certiq/error.hpp"
#include "certiq/errorlab.hpp"
#include "certiq/reconstruct.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

namespace certiq {
namespace {

using testing::Rng;

void expect_derivatives_match(const FieldFunction& u, Rng& rng, double lo, double hi) {
    std::uniform_real_distribution<double> coord(lo, hi);
    const double step = 1e-5;
    int checked = 0;
    while (checked < 200) {
        const Point2 x{coord(rng), coord(rng)};
        if (u.kink_distance && u.kink_distance(x) < 1e-2) continue;
        ++checked;
        const Vec2 g = u.gradient(x);
        const Point2 xp{x.x + step, x.y}, xm{x.x - step, x.y}, yp{x.x, x.y + step}, ym{x.x, x.y - step};
        EXPECT_NEAR(g.x, (u.value(xp) - u.value(xm)) / (2 * step), 1e-6 * (1 + std::abs(g.x)));
        EXPECT_NEAR(g.y, (u.value(yp) - u.value(ym)) / (2 * step), 1e-6 * (1 + std::abs(g.y)));
        const Hessian2 h = u.hessian(x);
        const double tol = 1e-4 * (1 + std::abs(h.xx) + std::abs(h.xy) + std::abs(h.yy));
        EXPECT_NEAR(h.xx, (u.gradient(xp).x - u.gradient(xm).x) / (2 * step), tol);
        EXPECT_NEAR(h.xy, (u.gradient(yp).x - u.gradient(ym).x) / (2 * step), tol);
        EXPECT_NEAR(h.xy, (u.gradient(xp).y - u.gradient(xm).y) / (2 * step), tol);
        EXPECT_NEAR(h.yy, (u.gradient(yp).y - u.gradient(ym).y) / (2 * step), tol);
    }
}

TEST(Benchmarks, DerivativesMatchFiniteDifferences) {
    Rng rng(testing::kDefaultSeed + 50);
    expect_derivatives_match(smooth_function(), rng, -1.0, 1.0);
    expect_derivatives_match(circle_function(), rng, -1.0, 1.0);
    expect_derivatives_match(quadratic_bowl(), rng, -1.0, 1.0);
    // L-shape: sample the three quadrants of the domain only.
    const FieldFunction u = lshape_function();
    std::uniform_real_distribution<double> coord(-1.0, 1.0);
    const double step = 1e-6;
    int checked = 0;
    while (checked < 200) {
        const Point2 x{coord(rng), coord(rng)};
        if ((x.x > 0 && x.y > 0) || u.kink_distance(x) < 2e-2 || std::abs(x.x) < 2e-2 || std::abs(x.y) < 2e-2) continue;
        ++checked;
        const Vec2 g = u.gradient(x);
        EXPECT_NEAR(g.x, (u.value({x.x + step, x.y}) - u.value({x.x - step, x.y})) / (2 * step), 1e-6 * (1 + std::abs(g.x)));
        EXPECT_NEAR(g.y, (u.value({x.x, x.y + step}) - u.value({x.x, x.y - step})) / (2 * step), 1e-6 * (1 + std::abs(g.y)));
        const Hessian2 h = u.hessian(x);
        const double tol = 1e-4 * (1 + std::abs(h.xx) + std::abs(h.xy) + std::abs(h.yy));
        EXPECT_NEAR(h.xx, (u.gradient({x.x + step, x.y}).x - u.gradient({x.x - step, x.y}).x) / (2 * step), tol);
        EXPECT_NEAR(h.xy, (u.gradient({x.x, x.y + step}).x - u.gradient({x.x, x.y - step}).x) / (2 * step), tol);
        EXPECT_NEAR(h.yy, (u.gradient({x.x, x.y + step}).y - u.gradient({x.x, x.y - step}).y) / (2 * step), tol);
    }
}

TEST(Benchmarks, LShapeAngleConvention) {
    const FieldFunction u = lshape_function();
    const double r = 0.5;
    const double radial = (1 - r * r) * std::cbrt(r * r);
    EXPECT_NEAR(u.value({r, 0.0}), 0.0, 1e-15);
    EXPECT_NEAR(u.value({0.0, -r}), radial * std::sin(std::numbers::pi / 3), 1e-15);
    EXPECT_NEAR(u.value({-r, 0.0}), radial * std::sin(2 * std::numbers::pi / 3), 1e-15);
    EXPECT_NEAR(u.value({0.0, r}), 0.0, 1e-14);
    EXPECT_EQ(u.value({0.9, -0.9}), 0.0);
    EXPECT_EQ(u.value({0.0, 0.0}), 0.0);
}

TEST(Benchmarks, CircleAndSmoothValues) {
    const FieldFunction c = circle_function();
    EXPECT_DOUBLE_EQ(c.value({0.0, 0.0}), 1.0);
    EXPECT_NEAR(c.value({0.3, 0.4}), 0.5, 1e-15);
    EXPECT_EQ(c.value({0.8, 0.8}), 0.0);
    const FieldFunction s = smooth_function();
    EXPECT_NEAR(s.value({1.0, 0.3}), 0.0, 1e-15);
    EXPECT_NEAR(s.value({0.5, 0.5}), 1.0, 1e-15);
}

TEST(Benchmarks, LibraryAndLookup) {
    const auto lib = benchmark_library();
    ASSERT_EQ(lib.size(), 4u);
    EXPECT_EQ(lib[0].name, "smooth");
    EXPECT_EQ(lib[3].name, "lshape_adapted");
    EXPECT_EQ(find_benchmark("circle").h1_slope, -0.25);
    EXPECT_THROW(find_benchmark("nope"), InvalidArgument);
}

TEST(Norms, QuadraticBowlAgainstZero) {
    const Mesh mesh = build_crisscross(3, Domain::square2);
    const BrokenField zero(mesh, 1);
    const FieldFunction u = quadratic_bowl();
    EXPECT_NEAR(h1_error(u, zero).total, std::sqrt(32.0 / 3.0), 1e-13);
    EXPECT_NEAR(l2_error(u, zero).total, std::sqrt(112.0 / 45.0), 1e-13);
}

TEST(Norms, LocalBestErrorMatchesDirectComputation) {
    const Mesh mesh = build_crisscross(4, Domain::square2);
    for (const FieldFunction& u : {smooth_function(), quadratic_bowl()}) {
        const BrokenField pi = local_best(u, mesh, 1);
        const FunctionSource src(u);
        const ErrorBreakdown a = local_best_h1_error(src, pi);
        const ErrorBreakdown b = h1_error(u, pi);
        EXPECT_NEAR(a.total, b.total, 1e-9 * b.total);
    }
}

TEST(Eta, VanishesForDataInTheSpace) {
    const Mesh mesh = build_crisscross(2, Domain::square2);
    const FieldFunction u = quadratic_bowl();
    const BrokenField pi = local_best(u, mesh, 2);
    const FunctionSource src(u);
    const ErrorBreakdown lb = local_best_h1_error(src, pi);
    const CertifiedConstants c = compute_constants(mesh, 2);
    EXPECT_LT(eta_h1(c, lb), 1e-6);
    EXPECT_LT(eta_l2(mesh, c, lb), 1e-6);
}

TEST(Eta, Factors) {
    const Mesh mesh = build_crisscross(1, Domain::unit_square);
    CertifiedConstants c = aggregate(mesh, 1, std::vector<double>(mesh.num_vertices(), 2.0),
                                     std::vector<double>(mesh.num_vertices(), 1.5));
    EXPECT_DOUBLE_EQ(c.c_omega, 3.0);
    ErrorBreakdown lb;
    lb.per_element.assign(mesh.num_triangles(), 0.5);
    lb.total = 1.0;
    EXPECT_NEAR(eta_h1(c, lb), std::sqrt(1.0 + 81.0), 1e-14);
    // Every patch: corners touch 2 elements, the center 4; h_a = 1.
    const double sum = 4 * (2 * 0.25) + (4 * 0.25);
    const double factor = 1.0 / (std::numbers::pi * std::sqrt(3.0)) + std::sqrt(3.0) * 3.0;
    EXPECT_NEAR(eta_l2(mesh, c, lb), factor * std::sqrt(sum), 1e-13);
}

TEST(Eta, ExplicitLocalBestConstant) {
    // |grad(u - pi u)|_K <= sqrt(2) h_K / pi |u|_{H^2(K)}, |u|_{H^2(K)}^2 = 8 |K|.
    const Mesh mesh = build_crisscross(4, Domain::lshape);
    const FieldFunction u = quadratic_bowl();
    const BrokenField pi = local_best(u, mesh, 1);
    const ErrorBreakdown lb = h1_error(u, pi);
    for (std::size_t k = 0; k < mesh.num_triangles(); ++k) {
        const ElementGeometry g = element_geometry(mesh, k);
        EXPECT_LE(lb.per_element[k], local_best_factor(1, g.h, 1) * std::sqrt(8.0 * g.area));
    }
}

TEST(Slopes, ExactPowerLaw) {
    const std::vector<double> n{10, 40, 160, 640};
    std::vector<double> e;
    for (double x : n) e.push_back(3.0 * std::pow(x, -0.75));
    EXPECT_NEAR(fit_slope(n, e, 3), -0.75, 1e-12);
    EXPECT_NEAR(fit_slope(n, e, 4), -0.75, 1e-12);
    e[0] = 1.0;  // outside the window
    EXPECT_NEAR(fit_slope(n, e, 3), -0.75, 1e-12);
    EXPECT_THROW(fit_slope(n, e, 1), InvalidArgument);
    EXPECT_THROW(fit_slope(n, e, 5), InvalidArgument);
}

TEST(Slopes, Window) {
    EXPECT_EQ(slope_window(2), 2u);
    EXPECT_EQ(slope_window(3), 3u);
    EXPECT_EQ(slope_window(4), 3u);
    EXPECT_EQ(slope_window(6), 5u);
}

TEST(Study, MeshSequences) {
    StudyOptions opts;
    opts.levels = 3;
    const auto smooth = benchmark_meshes(find_benchmark("smooth"), opts);
    ASSERT_EQ(smooth.size(), 3u);
    EXPECT_EQ(smooth[0].num_triangles(), 100u);
    EXPECT_EQ(smooth[2].num_triangles(), 1600u);
    const auto lshape = benchmark_meshes(find_benchmark("lshape"), opts);
    EXPECT_EQ(lshape[0].num_triangles(), 3u * 36u);
    const auto graded = benchmark_meshes(find_benchmark("lshape_adapted"), opts);
    for (std::size_t l = 1; l < graded.size(); ++l) EXPECT_GT(graded[l].num_triangles(), graded[l - 1].num_triangles());
}

TEST(Study, SingleLevelOrderingAndBounds) {
    StudyOptions opts;
    const Mesh mesh = build_crisscross(4, Domain::square2);
    const ErrorReport r = evaluate_level(find_benchmark("smooth"), mesh, opts);
    EXPECT_TRUE(r.bounds_hold);
    EXPECT_LE(r.h1.lb, r.h1.gb * (1 + 1e-12));
    EXPECT_LE(r.h1.gb, r.h1.qi * (1 + 1e-12));
    EXPECT_GT(r.eta_h1, r.h1.qi);
    EXPECT_GT(r.eta_l2, r.l2.qi);
    EXPECT_LT(r.quadrature_consistency, 1e-8);
    EXPECT_EQ(r.nrdofs, 25u);
}

} // namespace
} // namespace certiq
