#include "certiq/medit.hpp"

#include "certiq/error.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace certiq {

namespace {

struct Token {
    std::string text;
    std::size_t line;
};

std::vector<Token> tokenize(std::istream& in) {
    std::vector<Token> tokens;
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        std::size_t i = 0;
        while (i < line.size()) {
            while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
            std::size_t j = i;
            while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
            if (j > i) tokens.push_back({line.substr(i, j - i), number});
            i = j;
        }
    }
    return tokens;
}

class Cursor {
public:
    explicit Cursor(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

    bool done() const noexcept { return pos_ >= tokens_.size(); }
    std::size_t line() const noexcept {
        if (tokens_.empty()) return 0;
        return pos_ < tokens_.size() ? tokens_[pos_].line : tokens_.back().line;
    }

    const Token& next(const char* what) {
        if (done()) throw MeditError(line(), std::string("unexpected end of file, expected ") + what);
        return tokens_[pos_++];
    }

    long long next_int(const char* what) {
        const Token& t = next(what);
        long long value = 0;
        const auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), value);
        if (ec != std::errc() || ptr != t.text.data() + t.text.size())
            throw MeditError(t.line, std::string("expected integer ") + what + ", got '" + t.text + "'");
        return value;
    }

    double next_real(const char* what) {
        const Token& t = next(what);
        try {
            std::size_t used = 0;
            const double value = std::stod(t.text, &used);
            if (used != t.text.size() || !std::isfinite(value)) throw std::invalid_argument("bad");
            return value;
        } catch (const std::exception&) {
            throw MeditError(t.line, std::string("expected real ") + what + ", got '" + t.text + "'");
        }
    }

private:
    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
};

std::size_t count_of(Cursor& cur, const std::string& section) {
    const std::size_t line = cur.line();
    const long long n = cur.next_int(("entry count of " + section).c_str());
    if (n < 0) throw MeditError(line, "negative entry count for " + section);
    return static_cast<std::size_t>(n);
}

// Number of values per entry for sections that are recognized but not used.
// A negative width means "width equals the mesh dimension".
const std::unordered_map<std::string_view, int>& skipped_sections() {
    static const std::unordered_map<std::string_view, int> table = {
        {"Edges", 3},           {"Corners", 1},          {"RequiredVertices", 1}, {"Ridges", 1},
        {"RequiredEdges", 1},   {"RequiredTriangles", 1}, {"Quadrilaterals", 5},   {"Tetrahedra", 5},
        {"Normals", -1},        {"Tangents", -1},        {"NormalAtVertices", 2}, {"TangentAtVertices", 2},
        {"TangentAtEdges", 3},  {"NormalAtTriangleVertices", 3},
    };
    return table;
}

} // namespace

Mesh read_medit(std::istream& in) {
    Cursor cur(tokenize(in));
    if (cur.done()) throw MeditError(0, "empty input");

    {
        const Token& head = cur.next("MeshVersionFormatted");
        if (head.text != "MeshVersionFormatted")
            throw MeditError(head.line, "malformed header: expected 'MeshVersionFormatted', got '" + head.text + "'");
        const std::size_t line = cur.line();
        const long long version = cur.next_int("format version");
        if (version < 1 || version > 4) throw MeditError(line, "unsupported format version " + std::to_string(version));
    }

    int dimension = 0;
    bool have_vertices = false;
    bool have_triangles = false;
    bool ended = false;
    std::vector<Point2> vertices;
    std::vector<int> vertex_refs;
    std::vector<Triangle> triangles;
    std::vector<int> triangle_refs;
    std::vector<std::size_t> triangle_lines;

    while (!cur.done() && !ended) {
        const Token& kw = cur.next("section keyword");
        const std::size_t kw_line = kw.line;
        const std::string keyword = kw.text;
        if (keyword == "Dimension") {
            const std::size_t line = cur.line();
            const long long d = cur.next_int("dimension");
            if (d != 2) throw MeditError(line, "only dimension 2 is supported, got " + std::to_string(d));
            dimension = 2;
        } else if (keyword == "Vertices") {
            if (dimension == 0) throw MeditError(kw_line, "'Vertices' before 'Dimension'");
            if (have_vertices) throw MeditError(kw_line, "duplicate 'Vertices' section");
            const std::size_t n = count_of(cur, keyword);
            vertices.reserve(n);
            vertex_refs.reserve(n);
            for (std::size_t i = 0; i < n; ++i) {
                const double x = cur.next_real("vertex coordinate");
                const double y = cur.next_real("vertex coordinate");
                const long long ref = cur.next_int("vertex reference");
                vertices.push_back({x, y});
                vertex_refs.push_back(static_cast<int>(ref));
            }
            have_vertices = true;
        } else if (keyword == "Triangles") {
            if (have_triangles) throw MeditError(kw_line, "duplicate 'Triangles' section");
            const std::size_t n = count_of(cur, keyword);
            for (std::size_t i = 0; i < n; ++i) {
                const std::size_t line = cur.line();
                Triangle t{};
                for (auto& v : t) {
                    const long long idx = cur.next_int("triangle vertex index");
                    if (idx < 1 || (have_vertices && static_cast<std::size_t>(idx) > vertices.size()))
                        throw MeditError(line, "triangle vertex index " + std::to_string(idx) + " out of range");
                    v = static_cast<std::size_t>(idx - 1);
                }
                const long long ref = cur.next_int("triangle reference");
                triangles.push_back(t);
                triangle_refs.push_back(static_cast<int>(ref));
                triangle_lines.push_back(line);
            }
            have_triangles = true;
        } else if (keyword == "End") {
            ended = true;
        } else if (const auto it = skipped_sections().find(keyword); it != skipped_sections().end()) {
            const std::size_t n = count_of(cur, keyword);
            const int width = it->second < 0 ? dimension : it->second;
            for (std::size_t i = 0; i < n * static_cast<std::size_t>(width); ++i) cur.next("section entry");
        } else {
            throw MeditError(kw_line, "unknown section '" + keyword + "'");
        }
    }

    if (dimension == 0) throw MeditError(cur.line(), "missing 'Dimension'");
    if (!have_vertices) throw MeditError(cur.line(), "missing 'Vertices' section");
    if (!have_triangles) throw MeditError(cur.line(), "missing 'Triangles' section");

    for (std::size_t k = 0; k < triangles.size(); ++k) {
        const Triangle& t = triangles[k];
        for (std::size_t v : t)
            if (v >= vertices.size()) throw MeditError(triangle_lines[k], "triangle vertex index out of range");
        if (!(signed_area2(vertices[t[0]], vertices[t[1]], vertices[t[2]]) > 0.0))
            throw MeditError(triangle_lines[k], "triangle " + std::to_string(k + 1) + " has non-positive area");
    }

    try {
        return Mesh(std::move(vertices), std::move(triangles), std::move(vertex_refs), std::move(triangle_refs));
    } catch (const MeshError& e) {
        throw MeditError(cur.line(), e.what());
    }
}

Mesh read_medit_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open mesh file '" + path + "'");
    return read_medit(in);
}

void write_medit(std::ostream& out, const Mesh& mesh) {
    const auto precision = out.precision(std::numeric_limits<double>::max_digits10);
    out << "MeshVersionFormatted 2\n\nDimension 2\n\nVertices\n" << mesh.num_vertices() << '\n';
    for (std::size_t v = 0; v < mesh.num_vertices(); ++v)
        out << mesh.vertex(v).x << ' ' << mesh.vertex(v).y << ' ' << mesh.vertex_refs()[v] << '\n';
    out << "\nTriangles\n" << mesh.num_triangles() << '\n';
    for (std::size_t k = 0; k < mesh.num_triangles(); ++k) {
        const Triangle& t = mesh.triangle(k);
        out << t[0] + 1 << ' ' << t[1] + 1 << ' ' << t[2] + 1 << ' ' << mesh.triangle_refs()[k] << '\n';
    }
    out << "\nEnd\n";
    out.precision(precision);
}

void write_medit_file(const std::string& path, const Mesh& mesh) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write mesh file '" + path + "'");
    write_medit(out, mesh);
}

} // namespace certiq
