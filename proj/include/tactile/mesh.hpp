#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tactile/vec.hpp"

namespace tactile {

using Face = std::array<std::uint32_t, 3>;

// Group name make_tile gives to the stylizable top face.
inline constexpr std::string_view kTopGroup = "top";

// Indexed triangle mesh. Positions are in millimetres unless the mesh has
// been normalized. All per-vertex attributes are indexed like `vertices`.
struct TriMesh {
    std::vector<Vec3> vertices;
    std::vector<Face> faces;
    std::vector<Vec3> normals;
    std::optional<std::vector<Vec2>> uvs;
    std::optional<std::vector<Vec3>> colors;

    // Face groups, as written by OBJ "g" records. Either empty, or
    // face_groups.size() == faces.size() with entries indexing group_names.
    std::vector<std::string> group_names;
    std::vector<std::uint32_t> face_groups;

    std::size_t vertex_count() const { return vertices.size(); }
    std::size_t face_count() const { return faces.size(); }
    bool has_groups() const { return !face_groups.empty(); }
};

struct BoundingBox {
    Vec3 min;
    Vec3 max;

    Vec3 extent() const { return max - min; }
    Vec3 center() const { return (min + max) * 0.5; }
    double max_extent() const;
};

// Non-fatal conditions noticed while processing (isolated vertices, dropped
// partial attributes, ...).
struct Diagnostics {
    std::vector<std::string> warnings;
};

// Throws InvalidArgument describing the first violated invariant.
void validate(const TriMesh& mesh);

BoundingBox bounding_box(const TriMesh& mesh);

double surface_area(const TriMesh& mesh);

// Sorted indices of all vertices referenced by faces of `group`. Empty when
// the group does not exist.
std::vector<std::uint32_t> group_vertices(const TriMesh& mesh, std::string_view group);

// ASCII OBJ. Quads and larger polygons are fan-triangulated; missing normals
// are computed; parse failures throw ParseError carrying the line number.
TriMesh load_obj(const std::filesystem::path& path, Diagnostics* diagnostics = nullptr);
TriMesh parse_obj(std::istream& in, const std::string& source_name,
                  Diagnostics* diagnostics = nullptr);

void save_obj(const TriMesh& mesh, const std::filesystem::path& path);
void write_obj(const TriMesh& mesh, std::ostream& out);

// p_normalized = (p + translation) * scale
struct UnitCubeTransform {
    double scale = 1.0;
    Vec3 translation;

    Vec3 apply(const Vec3& p) const { return (p + translation) * scale; }
    Vec3 invert(const Vec3& p) const { return p * (1.0 / scale) - translation; }
};

struct NormalizedMesh {
    TriMesh mesh;
    UnitCubeTransform transform;
};

// Centers the bounding box on the origin and scales the longest axis to 1.
NormalizedMesh normalize_unit_cube(const TriMesh& mesh);

// Maps positions back through the inverse of `transform`; normals are
// unaffected by the uniform scale.
TriMesh denormalize(const TriMesh& mesh, const UnitCubeTransform& transform);

// One round of 1:4 midpoint subdivision. Edge midpoints are shared between
// neighbouring faces; uvs, colors and normals are interpolated linearly
// (normals renormalized) and faces keep their group.
TriMesh subdivide_once(const TriMesh& mesh);

// Repeats subdivide_once until face_count >= target_faces.
TriMesh subdivide_to(const TriMesh& mesh, std::size_t target_faces);

// Area-weighted vertex normals. Vertices without incident faces get +Z and a
// warning.
TriMesh compute_normals(const TriMesh& mesh, Diagnostics* diagnostics = nullptr);

// Box [0,sx]x[0,sy]x[0,sz] whose top face is a regular grid with 2*4^k
// triangles, k the smallest value reaching target_faces in total. The side
// walls fan onto the top rim so the box stays watertight. Faces are grouped
// "top", "side" and "bottom"; every vertex gets the planar uv (x/sx, y/sy);
// top vertices carry the +Z normal so displacement of the rim is vertical.
TriMesh make_tile(const Vec3& size_mm, std::size_t target_faces);

// Replaces uvs with a planar projection onto the two longest bounding-box
// axes, normalized to [0,1]^2.
TriMesh with_planar_uvs(const TriMesh& mesh);

}  // namespace tactile
