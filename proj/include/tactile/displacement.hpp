#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "tactile/heightfield.hpp"
#include "tactile/mesh.hpp"

namespace tactile {

// Default magnification of the texture slider.
inline constexpr double kDefaultMagnification = 1.0;
// Physical height, in mm, of a heightfield value of 1.0 at magnification 1.
// Placeholder scale; override per print.
inline constexpr double kDefaultAmplitudeMm = 1.0;

struct DisplacementParams {
    double magnification = kDefaultMagnification;
    double amplitude_mm = kDefaultAmplitudeMm;
    // Vertices allowed to move. std::nullopt means every vertex.
    std::optional<std::vector<std::uint32_t>> active_mask;
};

// Throws InvalidArgument if magnification < 0, amplitude <= 0, or a mask
// index is out of range for `vertex_count`.
void validate(const DisplacementParams& params, std::size_t vertex_count);

// p' = p + magnification * amplitude_mm * h(uv) * n for every active vertex.
// Uses the mesh's stored normals; the output keeps them unchanged, so callers
// recompute normals explicitly if they need them for the displaced surface.
TriMesh apply_heightfield(const TriMesh& mesh, const Heightfield& field, const DisplacementParams& params);

// Params whose active mask is exactly the vertex set of the "top" group.
// Throws InvalidArgument for meshes without that group.
DisplacementParams freeze_except_top(const TriMesh& mesh);

// Vertices of the top group if the mesh has one, otherwise all vertices.
std::vector<std::uint32_t> default_active_vertices(const TriMesh& mesh);

// Color passthrough: stores the texture sampled at each vertex uv as vertex
// colors. Geometry is untouched.
TriMesh bake_vertex_colors(const TriMesh& mesh, const TextureImage& texture);

}  // namespace tactile
