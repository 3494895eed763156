#include "bench_cli.hpp"

#include "certiq/constants.hpp"
#include "certiq/error.hpp"

#include <gtest/gtest.h>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

namespace certiq {
namespace {

namespace fs = std::filesystem;

struct Table {
    std::string header;
    std::vector<std::vector<double>> rows;
};

Table read_table(const fs::path& path) {
    std::ifstream in(path);
    Table t;
    std::getline(in, t.header);
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::vector<double> row;
        double x;
        while (ls >> x) row.push_back(x);
        t.rows.push_back(row);
    }
    return t;
}

std::vector<std::vector<std::string>> read_csv(const std::string& text) {
    std::vector<std::vector<std::string>> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        out.push_back(cells);
    }
    return out;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("certiq_cli_test_" + name);
    fs::remove_all(dir);
    return dir;
}

int run_cli(std::vector<std::string> args, std::string* out_text = nullptr, std::string* err_text = nullptr) {
    args.insert(args.begin(), "certiq");
    std::vector<const char*> argv;
    for (const std::string& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int rc = cli::main(static_cast<int>(argv.size()), argv.data(), out, err);
    if (out_text) *out_text = out.str();
    if (err_text) *err_text = err.str();
    return rc;
}

TEST(BenchCli, RunWritesOneRowPerLevelAndIsDeterministic) {
    const fs::path a = scratch("run_a"), b = scratch("run_b");
    ASSERT_EQ(run_cli({"run", "--case", "smooth", "--levels", "4", "--out", a.string()}), 0);
    ASSERT_EQ(run_cli({"run", "--case", "smooth", "--levels", "4", "--out", b.string()}), 0);
    for (const char* name : {"errors_H1.txt", "errors_L2.txt", "ratios.txt", "summary.json"}) {
        ASSERT_TRUE(fs::exists(a / name)) << name;
        EXPECT_EQ(slurp(a / name), slurp(b / name)) << name;
    }
    for (const char* name : {"errors_H1.txt", "errors_L2.txt"}) {
        const Table t = read_table(a / name);
        EXPECT_EQ(t.header, "nrdofs LB GB QI LI");
        ASSERT_EQ(t.rows.size(), 4u);
        for (const auto& row : t.rows) EXPECT_EQ(row.size(), 5u);
    }
    const Table ratios = read_table(a / "ratios.txt");
    EXPECT_EQ(ratios.header, "nrdofs eH1 EH1 eL2 EL2");
    ASSERT_EQ(ratios.rows.size(), 4u);
    for (const auto& row : ratios.rows) {
        ASSERT_EQ(row.size(), 5u);
        EXPECT_GE(row[2], row[1]);
        EXPECT_GE(row[4], row[3]);
    }
    fs::remove_all(a);
    fs::remove_all(b);
}

// Layout consumed by the figure script: tables and summary agree.
TEST(BenchCli, TablesAndSummaryAreConsistent) {
    const fs::path dir = scratch("schema");
    ASSERT_EQ(run_cli({"run", "--case", "circle", "--levels", "3", "--out", dir.string(), "--seed", "7"}), 0);
    const Table h1 = read_table(dir / "errors_H1.txt");
    const Table l2 = read_table(dir / "errors_L2.txt");
    const Table ratios = read_table(dir / "ratios.txt");
    const auto summary = nlohmann::json::parse(slurp(dir / "summary.json"));

    EXPECT_EQ(summary.at("case"), "circle");
    EXPECT_EQ(summary.at("seed"), 7);
    EXPECT_EQ(summary.at("levels"), 3);
    EXPECT_TRUE(summary.at("bounds_hold").get<bool>());
    EXPECT_TRUE(summary.at("ratios_ok").get<bool>());
    for (const char* norm : {"H1", "L2"}) {
        for (const char* col : {"LB", "GB", "QI", "LI"}) EXPECT_TRUE(summary.at("slopes").at(norm).at(col).is_number());
        EXPECT_EQ(summary.at("effectivity").at(norm).size(), 2u);
    }

    const auto& rows = summary.at("rows");
    ASSERT_EQ(rows.size(), 3u);
    double lo_h1 = 1e300, hi_h1 = 0.0;
    for (std::size_t i = 0; i < 3; ++i) {
        EXPECT_EQ(rows[i].at("nrdofs").get<double>(), h1.rows[i][0]);
        EXPECT_EQ(ratios.rows[i][0], h1.rows[i][0]);
        EXPECT_EQ(l2.rows[i][0], h1.rows[i][0]);
        // Tables carry 13 significant digits.
        EXPECT_NEAR(ratios.rows[i][1], h1.rows[i][3], 1e-12 * h1.rows[i][3]);
        EXPECT_NEAR(ratios.rows[i][3], l2.rows[i][3], 1e-12 * l2.rows[i][3]);
        const double eff = ratios.rows[i][2] / ratios.rows[i][1];
        EXPECT_NEAR(eff, rows[i].at("effectivity_H1").get<double>(), 1e-11 * eff);
        lo_h1 = std::min(lo_h1, eff);
        hi_h1 = std::max(hi_h1, eff);
    }
    EXPECT_NEAR(summary.at("effectivity").at("H1")[0].get<double>(), lo_h1, 1e-11 * lo_h1);
    EXPECT_NEAR(summary.at("effectivity").at("H1")[1].get<double>(), hi_h1, 1e-11 * hi_h1);
    fs::remove_all(dir);
}

TEST(BenchCli, RejectsBadConfig) {
    std::string err;
    EXPECT_NE(run_cli({"run", "--case", "square"}, nullptr, &err), 0);
    EXPECT_NE(err.find("square"), std::string::npos);
    EXPECT_NE(run_cli({"run", "--degree", "0"}), 0);
    EXPECT_NE(run_cli({"run", "--levels", "1"}), 0);
    EXPECT_NE(run_cli({"run", "--cg-tol", "-1"}), 0);
    EXPECT_NE(run_cli({"run", "--quad-exactness", "30"}), 0);
    EXPECT_NE(run_cli({"run", "--grading-const", "0"}), 0);
    EXPECT_NE(run_cli({"run", "--seed", "0"}), 0);
    EXPECT_NE(run_cli({"run", "--levels", "many"}), 0);
    EXPECT_NE(run_cli({"constants", "--mesh", "crisscross:x:unit_square"}), 0);
    EXPECT_NE(run_cli({"constants", "--mesh", "crisscross:2:disk"}), 0);
    EXPECT_NE(run_cli({"constants", "--mesh", "/nonexistent/mesh.mesh"}), 0);
    EXPECT_NE(run_cli({"interpolate", "--mesh", "crisscross:2:square2", "--function", "cosh"}), 0);
    EXPECT_NE(run_cli({}), 0);
}

TEST(BenchCli, ConstantsOnSingleCell) {
    std::string text;
    ASSERT_EQ(run_cli({"constants", "--mesh", "crisscross:1:unit_square"}, &text), 0);
    const auto csv = read_csv(text);
    ASSERT_EQ(csv.size(), 6u);
    EXPECT_EQ(csv[0], (std::vector<std::string>{"vertex", "boundary", "rho", "lambda", "rho_lambda"}));
    for (std::size_t i = 1; i < csv.size(); ++i) {
        EXPECT_EQ(std::stoul(csv[i][0]), i - 1);
        const double rho = std::stod(csv[i][2]), lambda = std::stod(csv[i][3]);
        EXPECT_GE(rho, 1.0 + 1.0 / std::numbers::pi);
        EXPECT_NEAR(std::stod(csv[i][4]), rho * lambda, 1e-14 * rho * lambda);
    }
}

TEST(BenchCli, CongruentInteriorVerticesShareLambda) {
    std::string text;
    ASSERT_EQ(run_cli({"constants", "--mesh", "crisscross:4:square2", "--degree", "1"}, &text), 0);
    const auto csv = read_csv(text);
    const Mesh mesh = build_crisscross(4, Domain::square2);
    ASSERT_EQ(csv.size(), mesh.num_vertices() + 1);

    // Interior vertices fall into two congruence classes: grid corners
    // (8 triangles) and cell centers (4 triangles).
    std::map<std::size_t, std::vector<double>> by_valence;
    for (std::size_t v = 0; v < mesh.num_vertices(); ++v) {
        if (mesh.is_boundary_vertex(v)) {
            EXPECT_EQ(csv[v + 1][1], "1");
            continue;
        }
        EXPECT_EQ(csv[v + 1][1], "0");
        by_valence[vertex_patch(mesh, v).elements.size()].push_back(std::stod(csv[v + 1][3]));
    }
    ASSERT_EQ(by_valence.size(), 2u);
    for (const auto& [valence, lambdas] : by_valence) {
        ASSERT_GT(lambdas.size(), 1u);
        for (double l : lambdas) EXPECT_NEAR(l, lambdas.front(), 1e-8 * lambdas.front()) << "valence " << valence;
    }
}

TEST(BenchCli, InterpolateZeroAndBoundary) {
    for (const char* fn : {"zero", "smooth", "bowl"}) {
        std::string text;
        ASSERT_EQ(run_cli({"interpolate", "--mesh", "crisscross:3:square2", "--degree", "2", "--function", fn}, &text),
                  0);
        const auto csv = read_csv(text);
        EXPECT_EQ(csv[0], (std::vector<std::string>{"node", "x", "y", "value"}));
        for (std::size_t i = 1; i < csv.size(); ++i) {
            const double x = std::stod(csv[i][1]), y = std::stod(csv[i][2]), value = std::stod(csv[i][3]);
            const bool boundary = std::abs(std::abs(x) - 1.0) < 1e-12 || std::abs(std::abs(y) - 1.0) < 1e-12;
            if (boundary || std::string(fn) == "zero") {
                EXPECT_EQ(value, 0.0) << fn << " node " << csv[i][0];
            }
        }
    }
}

TEST(BenchCli, InterpolateWritesFile) {
    const fs::path dir = scratch("interp");
    fs::create_directories(dir);
    const fs::path file = dir / "field.csv";
    std::string text;
    ASSERT_EQ(run_cli({"interpolate", "--mesh", "crisscross:2:lshape", "--out", file.string()}, &text), 0);
    EXPECT_TRUE(text.empty());
    EXPECT_EQ(read_csv(slurp(file))[0][0], "node");
    fs::remove_all(dir);
}

// For P1, the element mass matrix has smallest eigenvalue |K|/12, so a P1
// function obeys max_K |v| <= sqrt(12/|K|) ||v||_K. Applied to J u - I u,
// which vanishes where I u does, and split by the triangle inequality.
TEST(BenchCli, SmoothNodalErrorBelowL2Proxy) {
    const Mesh mesh = build_crisscross(8, Domain::square2);
    std::string text;
    ASSERT_EQ(run_cli({"interpolate", "--mesh", "crisscross:8:square2", "--degree", "1", "--function", "smooth"}, &text),
              0);
    const FieldFunction u = smooth_function();
    double max_err = 0.0;
    const auto csv = read_csv(text);
    for (std::size_t i = 1; i < csv.size(); ++i) {
        const Point2 x{std::stod(csv[i][1]), std::stod(csv[i][2])};
        if (std::abs(std::abs(x.x) - 1.0) < 1e-12 || std::abs(std::abs(x.y) - 1.0) < 1e-12) continue;
        max_err = std::max(max_err, std::abs(std::stod(csv[i][3]) - u.value(x)));
    }

    StudyOptions opts;
    const ErrorReport report = evaluate_level(find_benchmark("smooth"), mesh, opts);
    double area_min = 1e300;
    for (std::size_t k = 0; k < mesh.num_triangles(); ++k) area_min = std::min(area_min, element_geometry(mesh, k).area);
    const double proxy = std::sqrt(12.0 / area_min) * (report.l2.qi + report.l2.li);
    EXPECT_GT(max_err, 0.0);
    EXPECT_LE(max_err, proxy);
}

} // namespace
} // namespace certiq
