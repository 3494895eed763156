#pragma once

#include "certiq/errorlab.hpp"
#include "certiq/mesh.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

namespace certiq::cli {

/// Mesh given on the command line: `crisscross:N:DOMAIN` with DOMAIN one of
/// unit_square, square2, lshape, or a path to a MEDIT file.
Mesh load_mesh(const std::string& source);

struct RunConfig {
    std::string case_name = "smooth";
    int degree = 1;
    int levels = 4;
    std::string mesh = "builtin";  ///< "builtin" or a mesh source for level 0
    int quad_exactness = kDefaultErrorExactness;
    double cg_tol = 1e-10;
    std::filesystem::path out = ".";
    double grading_const = 1.0;
    std::uint64_t seed = 1;
};

/// Throws InvalidArgument for a non-positive or out-of-range field.
void validate(const RunConfig& config);

struct RunOutcome {
    StudyResult study;
    bool ratios_ok = false;  ///< eta >= error on every row of ratios.txt
    bool bounds_ok = false;  ///< global and local bound audits
};

/// Runs the study and writes errors_H1.txt, errors_L2.txt, ratios.txt and
/// summary.json into config.out.
RunOutcome run_benchmark(const RunConfig& config);

void write_error_table(std::ostream& out, const StudyResult& study, bool h1);
void write_ratio_table(std::ostream& out, const StudyResult& study);
void write_summary(std::ostream& out, const RunConfig& config, const StudyResult& study, bool ratios_ok);

/// Per-vertex constants CSV of a mesh.
void write_constants(std::ostream& out, const Mesh& mesh, int p);

/// Builtin function by name: zero, smooth, circle, lshape, bowl.
FieldFunction builtin_function(const std::string& name);

/// Nodal values of J u as CSV `node,x,y,value`.
void write_interpolant(std::ostream& out, const Mesh& mesh, int p, const std::string& function);

/// Entry point shared by the executable and the tests; returns the exit status.
int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace certiq::cli
