#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "tactile/heightfield.hpp"
#include "tactile/mesh.hpp"

namespace tactile {

// Summary of signed normal displacements in mm. `rms_mm` is mean-centered.
struct DisplacementStats {
    double min_mm = 0.0;
    double max_mm = 0.0;
    double mean_mm = 0.0;
    double rms_mm = 0.0;
    std::size_t count = 0;
};

struct ExtractedHeightfield {
    Heightfield field;
    // Raw range of the rasterized displacement grid that was mapped to [0,1].
    double range_min_mm = 0.0;
    double range_max_mm = 0.0;
    DisplacementStats vertex_stats;
};

// d_i = dot(p'_i - p_i, n_i) with the original normals. Throws
// InvalidArgument unless the two meshes share vertex count and faces.
std::vector<double> normal_displacements(const TriMesh& original, const TriMesh& modified);

// Statistics over the active vertices (default: the "top" group if present,
// otherwise every vertex).
DisplacementStats raw_displacement_stats(const TriMesh& original, const TriMesh& modified,
                                         const std::optional<std::vector<std::uint32_t>>& active = std::nullopt);

// Recovers a heightfield from a displaced mesh: per-vertex displacements are
// rasterized in uv space over every triangle whose vertices are all active
// (later triangles overwrite earlier ones on shared pixels), uncovered pixels
// take the value of the nearest covered pixel, and the grid is min-max mapped
// to [0,1]. A range below 1e-12 mm yields an all-zero field.
ExtractedHeightfield extract_heightfield(const TriMesh& original, const TriMesh& modified, std::size_t width,
                                         std::size_t height,
                                         const std::optional<std::vector<std::uint32_t>>& active = std::nullopt);

}  // namespace tactile
