// One PASS/FAIL line per acceptance criterion. `--only NAME` runs a single
// criterion; the exit status is nonzero when any selected criterion fails.

#include "certiq/constants.hpp"
#include "certiq/element_map.hpp"
#include "certiq/errorlab.hpp"
#include "certiq/medit.hpp"
#include "certiq/quadrature.hpp"
#include "certiq/quasinterp.hpp"
#include "certiq/reconstruct.hpp"

#include "oracles.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace certiq;
using certiq::testing::Rng;

struct Outcome {
    bool pass = true;
    std::string detail;
};

std::string fmt(double x) {
    std::ostringstream out;
    out.precision(4);
    out << x;
    return out.str();
}

double coefficient_norm(const Vector& v) { return std::sqrt(dot(v, v)); }

// --- convergence studies, shared by four criteria ---------------------------

const std::vector<StudyResult>& studies() {
    static const std::vector<StudyResult> results = [] {
        std::vector<StudyResult> out;
        StudyOptions opts;
        opts.degree = 1;
        opts.levels = 4;
        for (const BenchmarkCase& bench : benchmark_library()) out.push_back(convergence_study(bench, opts));
        return out;
    }();
    return results;
}

Outcome check_bounds() {
    Outcome o;
    std::size_t rows = 0;
    std::size_t local = 0;
    double worst_h1 = 0.0, worst_l2 = 0.0;  // max of error / eta
    for (const StudyResult& s : studies()) {
        for (const ErrorReport& r : s.rows) {
            ++rows;
            worst_h1 = std::max(worst_h1, r.h1.qi / r.eta_h1);
            worst_l2 = std::max(worst_l2, r.l2.qi / r.eta_l2);
            local += r.local_h1_violations + r.local_l2_violations;
            if (r.h1.qi > r.eta_h1 + 1e-8 || r.l2.qi > r.eta_l2 + 1e-8) {
                o.pass = false;
                o.detail += s.case_name + " level " + std::to_string(r.level) + " violated; ";
            }
        }
    }
    o.detail += std::to_string(rows) + " rows, max H1(QI)/eta_H1 = " + fmt(worst_h1) +
                ", max L2(QI)/eta_L2 = " + fmt(worst_l2) + ", local violations " + std::to_string(local);
    return o;
}

Outcome check_slopes() {
    Outcome o;
    for (const StudyResult& s : studies()) {
        const BenchmarkCase bench = find_benchmark(s.case_name);
        const bool h1_ok = std::abs(s.h1_slopes.qi - bench.h1_slope) <= bench.h1_tolerance;
        const bool l2_ok = std::abs(s.l2_slopes.qi - bench.l2_slope) <= bench.l2_tolerance;
        o.pass = o.pass && h1_ok && l2_ok;
        o.detail += s.case_name + " H1 " + fmt(s.h1_slopes.qi) + (h1_ok ? "" : "(!)") + " vs " + fmt(bench.h1_slope) +
                    " L2 " + fmt(s.l2_slopes.qi) + (l2_ok ? "" : "(!)") + " vs " + fmt(bench.l2_slope) + "; ";
    }
    return o;
}

Outcome check_effectivity() {
    Outcome o;
    double lo_h1 = 1e300, hi_h1 = 0.0, lo_l2 = 1e300, hi_l2 = 0.0;
    for (const StudyResult& s : studies()) {
        for (const ErrorReport& r : s.rows) {
            lo_h1 = std::min(lo_h1, r.effectivity_h1);
            hi_h1 = std::max(hi_h1, r.effectivity_h1);
            lo_l2 = std::min(lo_l2, r.effectivity_l2);
            hi_l2 = std::max(hi_l2, r.effectivity_l2);
            if (!(r.effectivity_h1 >= 3.0 && r.effectivity_h1 <= 30.0 && r.effectivity_l2 >= 20.0 &&
                  r.effectivity_l2 <= 500.0)) {
                o.pass = false;
                o.detail += s.case_name + " level " + std::to_string(r.level) + " outside; ";
            }
        }
    }
    o.detail += "H1 in [" + fmt(lo_h1) + ", " + fmt(hi_h1) + "], L2 in [" + fmt(lo_l2) + ", " + fmt(hi_l2) + "]";
    return o;
}

Outcome check_ordering() {
    Outcome o;
    std::size_t rows = 0;
    for (const StudyResult& s : studies()) {
        for (const ErrorReport& r : s.rows) {
            ++rows;
            if (r.h1.lb > r.h1.gb + 1e-8 || r.h1.gb > r.h1.qi + 1e-8) {
                o.pass = false;
                o.detail += s.case_name + " level " + std::to_string(r.level) + ": LB " + fmt(r.h1.lb) + " GB " +
                            fmt(r.h1.gb) + " QI " + fmt(r.h1.qi) + "; ";
            }
        }
    }
    o.detail += std::to_string(rows) + " rows checked";
    return o;
}

// --- projection ---------------------------------------------------------------

Outcome check_projection() {
    Outcome o;
    Rng rng(certiq::testing::kDefaultSeed);
    const Mesh structured = build_crisscross(4, Domain::square2);
    const Mesh unstructured = read_medit_file(std::string(CERTIQ_TEST_DATA_DIR) + "/unstructured.mesh");
    double worst = 0.0;
    for (const Mesh* mesh : {&structured, &unstructured}) {
        for (int p : {1, 2}) {
            const ConformingSpace space(*mesh, p);
            for (int trial = 0; trial < 20; ++trial) {
                const ConformingField u = certiq::testing::random_conforming(rng, space);
                const ConformingField ju = quasi_interpolate_broken(u.to_broken(), space);
                Vector diff = ju.coefficients();
                for (std::size_t i = 0; i < diff.size(); ++i) diff[i] -= u.coefficients()[i];
                worst = std::max(worst, coefficient_norm(diff) / coefficient_norm(u.coefficients()));
            }
        }
    }
    o.pass = worst <= 1e-9;
    o.detail = "80 fields, max relative coefficient error " + fmt(worst);
    return o;
}

// --- patch oracles ------------------------------------------------------------

std::vector<Mesh> random_patches(Rng& rng, int count) {
    std::vector<Mesh> out;
    for (int i = 0; i < count; ++i) out.push_back(certiq::testing::random_patch_mesh(rng, i % 2 == 0, 6.0));
    return out;
}

Outcome check_lambda_oracle() {
    Outcome o;
    Rng rng(certiq::testing::kDefaultSeed + 1);
    double worst_gap = 0.0, worst_pencil = 0.0;
    for (const Mesh& mesh : random_patches(rng, 10)) {
        const VertexPatch patch = vertex_patch(mesh, 0);
        const double lambda = lambda_a(mesh, patch, 1).lambda;

        const certiq::testing::PatchQuotient q(mesh, patch, 1);
        const certiq::testing::SampledMax sampled = certiq::testing::sample_quotient_max(
            [&q](const Vector& v) { return q.numerator(v); }, [&q](const Vector& v) { return q.denominator(v); },
            q.dim(), rng, 2000, 3000);
        const double max_sample = std::sqrt(sampled.value);
        // Rounding guard of a few ulps on the lower end of the bracket.
        const bool in_bracket = lambda >= max_sample * (1.0 - 1e-12) && lambda <= max_sample * (1.0 + 1e-3);
        worst_gap = std::max(worst_gap, lambda / max_sample - 1.0);

        const certiq::testing::DensePencil pencil = certiq::testing::independent_p1_pencil(mesh, patch, 16);
        const double independent = std::sqrt(certiq::testing::deflated_max_eig(pencil.numerator, pencil.denominator));
        const double rel = std::abs(lambda - independent) / independent;
        worst_pencil = std::max(worst_pencil, rel);

        if (!in_bracket || rel > 1e-8) {
            o.pass = false;
            o.detail += "patch with " + std::to_string(patch.elements.size()) + " elements: lambda " + fmt(lambda) +
                        " sample " + fmt(max_sample) + " pencil " + fmt(independent) + "; ";
        }
    }
    o.detail += "10 patches, max lambda/max_sample - 1 = " + fmt(worst_gap) + ", max pencil mismatch " + fmt(worst_pencil);
    return o;
}

Eigen::VectorXd to_eigen_vector(const Vector& v) {
    Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) out(static_cast<Eigen::Index>(i)) = v[i];
    return out;
}

Outcome check_flux_sup() {
    Outcome o;
    Rng rng(certiq::testing::kDefaultSeed + 2);
    std::normal_distribution<double> n01;
    double worst_excess = -1.0;   // max over w of (g, w)/|w| / |r| - 1
    double worst_optimized = 1.0; // min over u_h of optimized sample / |r|
    for (const Mesh& mesh : random_patches(rng, 10)) {
        const VertexPatch patch = vertex_patch(mesh, 0);
        const FluxReconstruction flux(mesh, patch, 1);
        const Eigen::MatrixXd kernel = certiq::testing::null_space(certiq::testing::to_eigen(flux.divergence()));
        const Eigen::MatrixXd m = certiq::testing::to_eigen(flux.mass());
        const Eigen::MatrixXd gram = kernel.transpose() * m * kernel;
        for (int trial = 0; trial < 10; ++trial) {
            const auto uh = certiq::testing::random_blocks(rng, patch.elements.size(), 1);
            const double r = flux.norm(flux.solve(uh));
            const Eigen::VectorXd g = kernel.transpose() * to_eigen_vector(flux.rhs(uh));
            for (int s = 0; s < 1000; ++s) {
                Eigen::VectorXd c(kernel.cols());
                for (Eigen::Index i = 0; i < c.size(); ++i) c(i) = n01(rng);
                const double ratio = g.dot(c) / std::sqrt(c.dot(gram * c));
                worst_excess = std::max(worst_excess, ratio / r - 1.0);
                if (ratio > r * (1.0 + 1e-10)) o.pass = false;
            }
            const auto sampled = certiq::testing::sample_quotient_max(
                [&](const Vector& v) {
                    const double gv = g.dot(to_eigen_vector(v));
                    return gv * gv;
                },
                [&](const Vector& v) {
                    const Eigen::VectorXd c = to_eigen_vector(v);
                    return c.dot(gram * c);
                },
                static_cast<std::size_t>(kernel.cols()), rng, 200, 400);
            const double best = std::sqrt(sampled.value);
            worst_optimized = std::min(worst_optimized, best / r);
            if (best < 0.99 * r || best > r * (1.0 + 1e-10)) o.pass = false;
        }
    }
    o.detail = "100 u_h x 1000 w: max sup ratio - 1 = " + fmt(worst_excess) +
               ", min optimized/|r| = " + fmt(worst_optimized);
    return o;
}

Outcome check_nonconformity() {
    Outcome o;
    Rng rng(certiq::testing::kDefaultSeed + 3);
    const Mesh structured = build_crisscross(4, Domain::square2);
    const Mesh unstructured = read_medit_file(std::string(CERTIQ_TEST_DATA_DIR) + "/unstructured.mesh");
    double max_conforming = 0.0;
    double min_jump = 1e300;
    std::size_t patches = 0;
    for (const Mesh* mesh : {&structured, &unstructured}) {
        for (int p : {1, 2}) {
            const ConformingSpace space(*mesh, p);
            // Continuous and zero on the domain boundary.
            const BrokenField u = certiq::testing::random_conforming(rng, space).to_broken();
            for (std::size_t a = 0; a < mesh->num_vertices(); ++a) {
                const VertexPatch patch = vertex_patch(*mesh, a);
                const FluxReconstruction flux(*mesh, patch, p);
                std::vector<BaryPoly> uh = restrict_to_patch(u, patch);
                max_conforming = std::max(max_conforming, flux.norm(flux.solve(uh)));
                // A jump across the edges of one patch element.
                uh[0] += certiq::testing::random_poly(rng, p);
                min_jump = std::min(min_jump, flux.norm(flux.solve(uh)));
                ++patches;
            }
        }
    }
    o.pass = max_conforming <= 1e-10 && min_jump > 1e-8;
    o.detail = std::to_string(patches) + " patches, continuous max |r| = " + fmt(max_conforming) +
               ", with jump min |r| = " + fmt(min_jump);
    return o;
}

// --- explicit constants ---------------------------------------------------------

struct NormPair {
    double value = 0.0;
    double gradient = 0.0;
};

NormPair poly_norms(const std::array<Point2, 3>& tri, const BaryPoly& v) {
    const auto frame = certiq::testing::affine_frame(tri);
    NormPair out;
    for (const auto& q : certiq::testing::physical_rule(tri, 2 * v.degree() + 2)) {
        const Bary l = frame.lambda(q.x);
        const auto d = v.bary_gradient(l);
        const Vec2 g = d[0] * frame.grad(0) + d[1] * frame.grad(1) + d[2] * frame.grad(2);
        out.value += q.w * v(l) * v(l);
        out.gradient += q.w * dot(g, g);
    }
    out.value = std::sqrt(out.value);
    out.gradient = std::sqrt(out.gradient);
    return out;
}

Outcome check_explicit_constants() {
    Outcome o;
    Rng rng(certiq::testing::kDefaultSeed + 4);
    const FieldFunction u = quadratic_bowl();
    double worst_lb = 0.0, worst_mean = 0.0, worst_face = 0.0;
    for (int t = 0; t < 50; ++t) {
        const auto tri = certiq::testing::random_triangle(rng);
        const Mesh mesh({tri[0], tri[1], tri[2]}, {{0, 1, 2}});
        const ElementGeometry g = element_geometry(mesh, 0);
        const double err = h1_error(u, local_best(u, mesh, 1)).total;
        const double bound = local_best_factor(1, g.h, 1) * std::sqrt(8.0 * g.area);
        worst_lb = std::max(worst_lb, err / bound);
    }
    for (int t = 0; t < 20; ++t) {
        const auto tri = certiq::testing::random_triangle(rng);
        const double h = triangle_geometry(tri).h;
        // Mean-zero cubic.
        BaryPoly v = certiq::testing::random_poly(rng, 3);
        double mean = 0.0;
        for (std::size_t i = 0; i < v.coefficients().size(); ++i) {
            const auto& a = multi_indices(3)[i];
            mean += v.coefficients()[i] * bary_monomial_integral(a[0], a[1], a[2]) * 2.0;
        }
        v -= BaryPoly::constant(mean).elevated(3);
        const NormPair n = poly_norms(tri, v);
        worst_mean = std::max(worst_mean, n.value / (h / std::numbers::pi * n.gradient));
        // Cubic vanishing on the face opposite a random vertex.
        const int vertex = static_cast<int>(rng() % 3);
        const BaryPoly w = BaryPoly::barycentric(vertex) * certiq::testing::random_poly(rng, 2);
        const NormPair m = poly_norms(tri, w);
        worst_face = std::max(worst_face, m.value / (2.0 * h / 2.0 * m.gradient));
    }
    o.pass = worst_lb <= 1.0 && worst_mean <= 1.0 && worst_face <= 1.0;
    o.detail = "max ratio to bound: local best " + fmt(worst_lb) + " (50 triangles), mean-zero Poincare " +
               fmt(worst_mean) + ", face Poincare " + fmt(worst_face) + " (20 cubics each)";
    return o;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"certiq acceptance criteria"};
    std::string only;
    app.add_option("--only", only, "run a single criterion");
    CLI11_PARSE(app, argc, argv);

    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"projection", check_projection},
        {"bounds", check_bounds},
        {"slopes", check_slopes},
        {"effectivity", check_effectivity},
        {"lambda_oracle", check_lambda_oracle},
        {"flux_sup", check_flux_sup},
        {"nonconformity", check_nonconformity},
        {"explicit_constants", check_explicit_constants},
        {"ordering", check_ordering},
    };

    bool known = only.empty();
    int failures = 0;
    for (const auto& [name, run] : criteria) {
        if (!only.empty() && name != only) continue;
        known = true;
        Outcome out;
        try {
            out = run();
        } catch (const std::exception& e) {
            out = {false, std::string("exception: ") + e.what()};
        }
        std::cout << (out.pass ? "[PASS] " : "[FAIL] ") << name << ": " << out.detail << std::endl;
        failures += out.pass ? 0 : 1;
    }
    if (!known) {
        std::cerr << "unknown criterion '" << only << "'\n";
        return 2;
    }
    return failures == 0 ? 0 : 1;
}
