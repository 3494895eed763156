#pragma once

#include "certiq/mesh.hpp"

#include <iosfwd>
#include <string>

namespace certiq {

/// Reads an ASCII MEDIT (.mesh) triangulation of dimension 2. Besides
/// `Vertices` and `Triangles`, the usual auxiliary sections (Edges, Corners,
/// Ridges, Required*, ...) are skipped. Reference tags are kept on the Mesh but
/// boundary detection is purely topological. Errors are MeditError with the
/// offending line number.
Mesh read_medit(std::istream& in);
Mesh read_medit_file(const std::string& path);

/// Writes `MeshVersionFormatted 2`, `Dimension 2`, `Vertices`, `Triangles`,
/// `End` with 1-based indices and round-trip precision.
void write_medit(std::ostream& out, const Mesh& mesh);
void write_medit_file(const std::string& path, const Mesh& mesh);

} // namespace certiq
