#include "bench_cli.hpp"

#include "certiq/constants.hpp"
#include "certiq/error.hpp"
#include "certiq/medit.hpp"
#include "certiq/quadrature.hpp"
#include "certiq/quasinterp.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

namespace certiq::cli {

namespace {

Domain parse_domain(const std::string& name) {
    if (name == "unit_square") return Domain::unit_square;
    if (name == "square2") return Domain::square2;
    if (name == "lshape") return Domain::lshape;
    throw InvalidArgument("unknown domain '" + name + "' (expected unit_square, square2, lshape)");
}

std::string number(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12e", x);
    return buf;
}

std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path.string());
    return out;
}

} // namespace

Mesh load_mesh(const std::string& source) {
    const std::string prefix = "crisscross:";
    if (source.rfind(prefix, 0) == 0) {
        const std::string rest = source.substr(prefix.size());
        const auto colon = rest.find(':');
        if (colon == std::string::npos) throw InvalidArgument("mesh source '" + source + "' needs crisscross:N:DOMAIN");
        int n = 0;
        try {
            std::size_t used = 0;
            n = std::stoi(rest.substr(0, colon), &used);
            if (used != colon) throw std::invalid_argument("trailing characters");
        } catch (const std::exception&) {
            throw InvalidArgument("mesh source '" + source + "': bad cell count");
        }
        return build_crisscross(n, parse_domain(rest.substr(colon + 1)));
    }
    return read_medit_file(source);
}

void validate(const RunConfig& c) {
    find_benchmark(c.case_name);
    if (c.degree < 1 || c.degree > 3) throw InvalidArgument("--degree must be 1, 2 or 3");
    if (c.levels < 2) throw InvalidArgument("--levels must be at least 2 to fit slopes");
    if (c.quad_exactness < 1 || c.quad_exactness > kMaxQuadratureExactness)
        throw InvalidArgument("--quad-exactness must lie in [1, " + std::to_string(kMaxQuadratureExactness) + "]");
    if (!(c.cg_tol > 0.0)) throw InvalidArgument("--cg-tol must be positive");
    if (!(c.grading_const > 0.0)) throw InvalidArgument("--grading-const must be positive");
    if (c.seed == 0) throw InvalidArgument("--seed must be positive");
}

void write_error_table(std::ostream& out, const StudyResult& study, bool h1) {
    out << "nrdofs LB GB QI LI\n";
    for (const ErrorReport& r : study.rows) {
        const ApproxErrors& e = h1 ? r.h1 : r.l2;
        out << r.nrdofs << ' ' << number(e.lb) << ' ' << number(e.gb) << ' ' << number(e.qi) << ' ' << number(e.li)
            << '\n';
    }
}

void write_ratio_table(std::ostream& out, const StudyResult& study) {
    out << "nrdofs eH1 EH1 eL2 EL2\n";
    for (const ErrorReport& r : study.rows)
        out << r.nrdofs << ' ' << number(r.h1.qi) << ' ' << number(r.eta_h1) << ' ' << number(r.l2.qi) << ' '
            << number(r.eta_l2) << '\n';
}

void write_summary(std::ostream& out, const RunConfig& config, const StudyResult& study, bool ratios_ok) {
    using json = nlohmann::ordered_json;
    const BenchmarkCase bench = find_benchmark(config.case_name);
    const auto approx = [](const ApproxErrors& e) { return json{{"LB", e.lb}, {"GB", e.gb}, {"QI", e.qi}, {"LI", e.li}}; };

    json rows = json::array();
    double h1_lo = std::numeric_limits<double>::infinity(), h1_hi = 0.0;
    double l2_lo = std::numeric_limits<double>::infinity(), l2_hi = 0.0;
    double consistency = 0.0;
    for (const ErrorReport& r : study.rows) {
        h1_lo = std::min(h1_lo, r.effectivity_h1);
        h1_hi = std::max(h1_hi, r.effectivity_h1);
        l2_lo = std::min(l2_lo, r.effectivity_l2);
        l2_hi = std::max(l2_hi, r.effectivity_l2);
        consistency = std::max(consistency, r.quadrature_consistency);
        rows.push_back({{"level", r.level},
                        {"nrdofs", r.nrdofs},
                        {"elements", r.num_elements},
                        {"h_max", r.h_max},
                        {"c_omega", r.c_omega},
                        {"H1", approx(r.h1)},
                        {"L2", approx(r.l2)},
                        {"eta_H1", r.eta_h1},
                        {"eta_L2", r.eta_l2},
                        {"effectivity_H1", r.effectivity_h1},
                        {"effectivity_L2", r.effectivity_l2},
                        {"quadrature_consistency", r.quadrature_consistency},
                        {"local_violations_H1", r.local_h1_violations},
                        {"local_violations_L2", r.local_l2_violations},
                        {"bounds_hold", r.bounds_hold}});
    }

    const json summary{
        {"case", config.case_name},
        {"degree", config.degree},
        {"levels", config.levels},
        {"mesh", config.mesh},
        {"quad_exactness", config.quad_exactness},
        {"cg_tol", config.cg_tol},
        {"grading_const", config.grading_const},
        {"seed", config.seed},
        {"slope_window", slope_window(study.rows.size())},
        {"slopes", {{"H1", approx(study.h1_slopes)}, {"L2", approx(study.l2_slopes)}}},
        {"expected_slopes",
         {{"H1", bench.h1_slope}, {"H1_tolerance", bench.h1_tolerance}, {"L2", bench.l2_slope}, {"L2_tolerance", bench.l2_tolerance}}},
        {"effectivity", {{"H1", {h1_lo, h1_hi}}, {"L2", {l2_lo, l2_hi}}}},
        {"max_quadrature_consistency", consistency},
        {"bounds_hold", study.all_bounds_hold},
        {"ratios_ok", ratios_ok},
        {"rows", rows},
    };
    out << summary.dump(2) << '\n';
}

RunOutcome run_benchmark(const RunConfig& config) {
    validate(config);
    const BenchmarkCase bench = find_benchmark(config.case_name);
    StudyOptions opts;
    opts.degree = config.degree;
    opts.levels = config.levels;
    opts.error_exactness = config.quad_exactness;
    opts.cg_tol = config.cg_tol;
    opts.grading_const = config.grading_const;
    if (config.mesh != "builtin") opts.base_mesh = load_mesh(config.mesh);

    RunOutcome outcome;
    outcome.study = convergence_study(bench, opts);
    outcome.ratios_ok = std::all_of(outcome.study.rows.begin(), outcome.study.rows.end(), [](const ErrorReport& r) {
        return r.eta_h1 >= r.h1.qi && r.eta_l2 >= r.l2.qi;
    });
    outcome.bounds_ok = outcome.study.all_bounds_hold;

    std::filesystem::create_directories(config.out);
    {
        auto f = open_output(config.out / "errors_H1.txt");
        write_error_table(f, outcome.study, true);
    }
    {
        auto f = open_output(config.out / "errors_L2.txt");
        write_error_table(f, outcome.study, false);
    }
    {
        auto f = open_output(config.out / "ratios.txt");
        write_ratio_table(f, outcome.study);
    }
    {
        auto f = open_output(config.out / "summary.json");
        write_summary(f, config, outcome.study, outcome.ratios_ok);
    }
    return outcome;
}

void write_constants(std::ostream& out, const Mesh& mesh, int p) {
    if (p < 1 || p > 3) throw InvalidArgument("--degree must be 1, 2 or 3");
    write_constants_csv(out, mesh, compute_constants(mesh, p));
}

FieldFunction builtin_function(const std::string& name) {
    if (name == "smooth") return smooth_function();
    if (name == "circle") return circle_function();
    if (name == "lshape") return lshape_function();
    if (name == "bowl") return quadratic_bowl();
    if (name == "zero") {
        FieldFunction f;
        f.name = "zero";
        f.value = [](const Point2&) { return 0.0; };
        f.gradient = [](const Point2&) { return Vec2{}; };
        f.hessian = [](const Point2&) { return Hessian2{}; };
        return f;
    }
    throw InvalidArgument("unknown function '" + name + "' (expected zero, smooth, circle, lshape, bowl)");
}

void write_interpolant(std::ostream& out, const Mesh& mesh, int p, const std::string& function) {
    if (p < 1 || p > 3) throw InvalidArgument("--degree must be 1, 2 or 3");
    const FieldFunction u = builtin_function(function);
    const ConformingSpace space(mesh, p);
    write_field_csv(out, quasi_interpolate(u, space));
}

int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"certiq: quasi-interpolation with certified error bounds"};
    app.require_subcommand(1);

    RunConfig config;
    CLI::App* run = app.add_subcommand("run", "run a convergence study and write the error tables");
    run->add_option("--case", config.case_name, "smooth, circle, lshape or lshape_adapted")->capture_default_str();
    run->add_option("--degree", config.degree, "polynomial degree p")->capture_default_str();
    run->add_option("--levels", config.levels, "number of mesh levels")->capture_default_str();
    run->add_option("--mesh", config.mesh, "builtin, crisscross:N:DOMAIN or a MEDIT file for level 0")
        ->capture_default_str();
    run->add_option("--quad-exactness", config.quad_exactness, "quadrature exactness of the error norms")
        ->capture_default_str();
    run->add_option("--cg-tol", config.cg_tol, "relative tolerance of the global-best CG solve")->capture_default_str();
    run->add_option("--out", config.out, "output directory")->capture_default_str();
    run->add_option("--grading-const", config.grading_const, "C_g of the graded L-shape meshes")->capture_default_str();
    run->add_option("--seed", config.seed, "seed recorded for randomized checks")->capture_default_str();

    std::string mesh_source;
    int degree = 1;
    std::string output;
    CLI::App* constants = app.add_subcommand("constants", "per-vertex rho_a and lambda_a as CSV");
    constants->add_option("--mesh", mesh_source, "crisscross:N:DOMAIN or a MEDIT file")->required();
    constants->add_option("--degree", degree, "polynomial degree p")->capture_default_str();
    constants->add_option("--out", output, "output file (default: standard output)");

    std::string function = "smooth";
    CLI::App* interpolate = app.add_subcommand("interpolate", "nodal values of the quasi-interpolant as CSV");
    interpolate->add_option("--mesh", mesh_source, "crisscross:N:DOMAIN or a MEDIT file")->required();
    interpolate->add_option("--degree", degree, "polynomial degree p")->capture_default_str();
    interpolate->add_option("--function", function, "zero, smooth, circle, lshape or bowl")->capture_default_str();
    interpolate->add_option("--out", output, "output file (default: standard output)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    }

    try {
        if (*run) {
            const RunOutcome outcome = run_benchmark(config);
            out << "case " << config.case_name << " p=" << config.degree << ": H1 slope " << outcome.study.h1_slopes.qi
                << ", L2 slope " << outcome.study.l2_slopes.qi << ", bounds " << (outcome.bounds_ok ? "hold" : "VIOLATED")
                << ", files in " << config.out.string() << '\n';
            return outcome.bounds_ok && outcome.ratios_ok ? 0 : 1;
        }
        const Mesh mesh = load_mesh(mesh_source);
        std::ostringstream buf;
        if (*constants)
            write_constants(buf, mesh, degree);
        else
            write_interpolant(buf, mesh, degree, function);
        if (output.empty()) {
            out << buf.str();
        } else {
            auto f = open_output(output);
            f << buf.str();
        }
        return 0;
    } catch (const std::exception& e) {
        err << "certiq: " << e.what() << '\n';
        return 2;
    }
}

} // namespace certiq::cli
