#include "tactile/displacement.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "tactile/error.hpp"

namespace tactile {

void validate(const DisplacementParams& params, std::size_t vertex_count) {
    if (!(params.magnification >= 0.0) || !std::isfinite(params.magnification)) {
        throw InvalidArgument("magnification must be a finite value >= 0");
    }
    if (!(params.amplitude_mm > 0.0) || !std::isfinite(params.amplitude_mm)) {
        throw InvalidArgument("amplitude_mm must be a finite value > 0");
    }
    if (params.active_mask) {
        for (std::uint32_t idx : *params.active_mask) {
            if (idx >= vertex_count) {
                throw InvalidArgument("active mask index " + std::to_string(idx) + " out of range");
            }
        }
    }
}

TriMesh apply_heightfield(const TriMesh& mesh, const Heightfield& field, const DisplacementParams& params) {
    validate(params, mesh.vertex_count());
    if (mesh.normals.size() != mesh.vertex_count()) {
        throw InvalidArgument("mesh normals must be computed before displacement");
    }
    std::vector<std::uint32_t> all;
    if (!params.active_mask) {
        all.resize(mesh.vertex_count());
        std::iota(all.begin(), all.end(), 0u);
    }
    const std::vector<std::uint32_t>& active = params.active_mask ? *params.active_mask : all;

    if (!mesh.uvs && !active.empty()) {
        std::string listed;
        const std::size_t shown = std::min<std::size_t>(active.size(), 8);
        for (std::size_t i = 0; i < shown; ++i) {
            listed += (i ? "," : "") + std::to_string(active[i]);
        }
        if (active.size() > shown) listed += ",... (" + std::to_string(active.size()) + " total)";
        throw InvalidArgument("active vertices lack uv coordinates: " + listed);
    }

    TriMesh out = mesh;
    const double scale = params.magnification * params.amplitude_mm;
    for (std::uint32_t i : active) {
        const Vec2& uv = (*mesh.uvs)[i];
        const double h = sample_bilinear(field, uv.u, uv.v);
        out.vertices[i] = mesh.vertices[i] + mesh.normals[i] * (scale * h);
    }
    return out;
}

DisplacementParams freeze_except_top(const TriMesh& mesh) {
    auto verts = group_vertices(mesh, kTopGroup);
    if (verts.empty()) {
        throw InvalidArgument("mesh has no '" + std::string(kTopGroup) + "' face group");
    }
    DisplacementParams params;
    params.active_mask = std::move(verts);
    return params;
}

std::vector<std::uint32_t> default_active_vertices(const TriMesh& mesh) {
    auto verts = group_vertices(mesh, kTopGroup);
    if (!verts.empty()) return verts;
    std::vector<std::uint32_t> all(mesh.vertex_count());
    std::iota(all.begin(), all.end(), 0u);
    return all;
}

TriMesh bake_vertex_colors(const TriMesh& mesh, const TextureImage& texture) {
    if (!mesh.uvs) {
        throw InvalidArgument("cannot bake colors into a mesh without uvs");
    }
    TriMesh out = mesh;
    std::vector<Vec3> colors;
    colors.reserve(mesh.vertex_count());
    for (const Vec2& uv : *mesh.uvs) {
        const Rgb c = sample_bilinear(texture, uv.u, uv.v);
        colors.push_back({c.r, c.g, c.b});
    }
    out.colors = std::move(colors);
    return out;
}

}  // namespace tactile
