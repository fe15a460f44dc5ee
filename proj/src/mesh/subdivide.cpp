#include <cmath>
#include <cstdint>
#include <unordered_map>

#include "tactile/error.hpp"
#include "tactile/mesh.hpp"

namespace tactile {

namespace {

std::uint64_t edge_key(std::uint32_t a, std::uint32_t b) {
    if (a > b) std::swap(a, b);
    return (static_cast<std::uint64_t>(a) << 32) | b;
}

Vec3 midpoint_normal(const Vec3& a, const Vec3& b, const Vec3& fallback) {
    const Vec3 m = (a + b) * 0.5;
    const double len = length(m);
    if (len < 1e-12) return fallback;
    return m * (1.0 / len);
}

}  // namespace

TriMesh subdivide_once(const TriMesh& mesh) {
    TriMesh out;
    out.vertices = mesh.vertices;
    out.normals = mesh.normals;
    if (mesh.uvs) out.uvs = *mesh.uvs;
    if (mesh.colors) out.colors = *mesh.colors;
    out.group_names = mesh.group_names;
    out.faces.reserve(mesh.faces.size() * 4);
    if (mesh.has_groups()) out.face_groups.reserve(mesh.faces.size() * 4);

    std::unordered_map<std::uint64_t, std::uint32_t> midpoints;
    midpoints.reserve(mesh.faces.size() * 2);

    auto midpoint = [&](std::uint32_t a, std::uint32_t b, const Vec3& face_normal) {
        const auto [it, inserted] =
            midpoints.emplace(edge_key(a, b), static_cast<std::uint32_t>(out.vertices.size()));
        if (inserted) {
            out.vertices.push_back((mesh.vertices[a] + mesh.vertices[b]) * 0.5);
            out.normals.push_back(midpoint_normal(mesh.normals[a], mesh.normals[b], face_normal));
            if (out.uvs) {
                const Vec2& ta = (*mesh.uvs)[a];
                const Vec2& tb = (*mesh.uvs)[b];
                out.uvs->push_back({(ta.u + tb.u) * 0.5, (ta.v + tb.v) * 0.5});
            }
            if (out.colors) {
                out.colors->push_back(((*mesh.colors)[a] + (*mesh.colors)[b]) * 0.5);
            }
        }
        return it->second;
    };

    for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
        const auto [a, b, c] = mesh.faces[f];
        Vec3 fn = cross(mesh.vertices[b] - mesh.vertices[a], mesh.vertices[c] - mesh.vertices[a]);
        const double fl = length(fn);
        fn = fl > 0.0 ? fn * (1.0 / fl) : Vec3{0.0, 0.0, 1.0};
        const std::uint32_t ab = midpoint(a, b, fn);
        const std::uint32_t bc = midpoint(b, c, fn);
        const std::uint32_t ca = midpoint(c, a, fn);
        out.faces.push_back({a, ab, ca});
        out.faces.push_back({ab, b, bc});
        out.faces.push_back({ca, bc, c});
        out.faces.push_back({ab, bc, ca});
        if (mesh.has_groups()) {
            out.face_groups.insert(out.face_groups.end(), 4, mesh.face_groups[f]);
        }
    }
    return out;
}

TriMesh subdivide_to(const TriMesh& mesh, std::size_t target_faces) {
    if (target_faces < mesh.face_count()) {
        throw InvalidArgument("target face count " + std::to_string(target_faces) +
                              " is below the current count " + std::to_string(mesh.face_count()));
    }
    if (mesh.faces.empty()) {
        throw InvalidArgument("cannot subdivide a mesh without faces");
    }
    TriMesh out = mesh;
    while (out.face_count() < target_faces) {
        out = subdivide_once(out);
    }
    return out;
}

}  // namespace tactile
