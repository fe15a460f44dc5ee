#include "tactile/extract.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <string>

#include "tactile/displacement.hpp"
#include "tactile/error.hpp"

namespace tactile {

namespace {

void check_topology(const TriMesh& original, const TriMesh& modified) {
    if (original.vertex_count() != modified.vertex_count() || original.faces != modified.faces) {
        throw InvalidArgument("meshes do not share topology (" + std::to_string(original.vertex_count()) + "/" +
                              std::to_string(original.face_count()) + " vs " +
                              std::to_string(modified.vertex_count()) + "/" +
                              std::to_string(modified.face_count()) + " vertices/faces)");
    }
    if (original.normals.size() != original.vertex_count()) {
        throw InvalidArgument("original mesh has no normals");
    }
}

std::vector<std::uint32_t> resolve_active(const TriMesh& mesh,
                                          const std::optional<std::vector<std::uint32_t>>& active) {
    if (!active) return default_active_vertices(mesh);
    for (std::uint32_t i : *active) {
        if (i >= mesh.vertex_count()) throw InvalidArgument("active vertex index out of range");
    }
    return *active;
}

// Multi-source breadth-first fill over the 8-neighbourhood; every uncovered
// pixel copies the value of the covered pixel its wave originated from.
void fill_holes(std::vector<double>& grid, std::vector<char>& covered, std::size_t w, std::size_t h) {
    std::deque<std::size_t> queue;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (covered[i]) queue.push_back(i);
    }
    while (!queue.empty()) {
        const std::size_t idx = queue.front();
        queue.pop_front();
        const auto x = static_cast<long long>(idx % w);
        const auto y = static_cast<long long>(idx / w);
        for (int dy = -1; dy <= 1; ++dy) {
            for (int dx = -1; dx <= 1; ++dx) {
                const long long nx = x + dx;
                const long long ny = y + dy;
                if ((dx == 0 && dy == 0) || nx < 0 || ny < 0 || nx >= static_cast<long long>(w) ||
                    ny >= static_cast<long long>(h)) {
                    continue;
                }
                const auto n = static_cast<std::size_t>(ny) * w + static_cast<std::size_t>(nx);
                if (!covered[n]) {
                    covered[n] = 1;
                    grid[n] = grid[idx];
                    queue.push_back(n);
                }
            }
        }
    }
}

}  // namespace

std::vector<double> normal_displacements(const TriMesh& original, const TriMesh& modified) {
    check_topology(original, modified);
    std::vector<double> d(original.vertex_count());
    for (std::size_t i = 0; i < d.size(); ++i) {
        d[i] = dot(modified.vertices[i] - original.vertices[i], original.normals[i]);
    }
    return d;
}

DisplacementStats raw_displacement_stats(const TriMesh& original, const TriMesh& modified,
                                         const std::optional<std::vector<std::uint32_t>>& active) {
    const auto d = normal_displacements(original, modified);
    const auto verts = resolve_active(original, active);
    DisplacementStats s;
    if (verts.empty()) return s;
    s.count = verts.size();
    s.min_mm = std::numeric_limits<double>::infinity();
    s.max_mm = -std::numeric_limits<double>::infinity();
    double sum = 0.0;
    for (std::uint32_t i : verts) {
        s.min_mm = std::min(s.min_mm, d[i]);
        s.max_mm = std::max(s.max_mm, d[i]);
        sum += d[i];
    }
    s.mean_mm = sum / static_cast<double>(verts.size());
    double sq = 0.0;
    for (std::uint32_t i : verts) {
        const double c = d[i] - s.mean_mm;
        sq += c * c;
    }
    s.rms_mm = std::sqrt(sq / static_cast<double>(verts.size()));
    return s;
}

ExtractedHeightfield extract_heightfield(const TriMesh& original, const TriMesh& modified, std::size_t width,
                                         std::size_t height,
                                         const std::optional<std::vector<std::uint32_t>>& active) {
    if (width == 0 || height == 0) {
        throw InvalidArgument("extraction resolution must be positive");
    }
    const auto d = normal_displacements(original, modified);
    if (!original.uvs) {
        throw InvalidArgument("original mesh has no uv coordinates");
    }
    const auto verts = resolve_active(original, active);
    std::vector<char> is_active(original.vertex_count(), 0);
    for (std::uint32_t i : verts) is_active[i] = 1;

    const auto& uvs = *original.uvs;
    const double fw = static_cast<double>(width);
    const double fh = static_cast<double>(height);
    std::vector<double> grid(width * height, 0.0);
    std::vector<char> covered(width * height, 0);
    bool any = false;

    for (const Face& f : original.faces) {
        if (!is_active[f[0]] || !is_active[f[1]] || !is_active[f[2]]) continue;
        // Pixel space: pixel (i, j) has its center at (i + 0.5, j + 0.5).
        const double ax = uvs[f[0]].u * fw, ay = uvs[f[0]].v * fh;
        const double bx = uvs[f[1]].u * fw, by = uvs[f[1]].v * fh;
        const double cx = uvs[f[2]].u * fw, cy = uvs[f[2]].v * fh;
        const double area = (bx - ax) * (cy - ay) - (cx - ax) * (by - ay);
        if (std::abs(area) < 1e-14) continue;
        const double inv = 1.0 / area;
        const double eps = 1e-9;

        const double min_x = std::min({ax, bx, cx}), max_x = std::max({ax, bx, cx});
        const double min_y = std::min({ay, by, cy}), max_y = std::max({ay, by, cy});
        const long long i0 = std::max(0LL, static_cast<long long>(std::ceil(min_x - 0.5 - eps)));
        const long long i1 = std::min(static_cast<long long>(width) - 1,
                                      static_cast<long long>(std::floor(max_x - 0.5 + eps)));
        const long long j0 = std::max(0LL, static_cast<long long>(std::ceil(min_y - 0.5 - eps)));
        const long long j1 = std::min(static_cast<long long>(height) - 1,
                                      static_cast<long long>(std::floor(max_y - 0.5 + eps)));
        for (long long j = j0; j <= j1; ++j) {
            const double py = static_cast<double>(j) + 0.5;
            for (long long i = i0; i <= i1; ++i) {
                const double px = static_cast<double>(i) + 0.5;
                const double w0 = ((bx - px) * (cy - py) - (cx - px) * (by - py)) * inv;
                const double w1 = ((cx - px) * (ay - py) - (ax - px) * (cy - py)) * inv;
                const double w2 = 1.0 - w0 - w1;
                if (w0 < -eps || w1 < -eps || w2 < -eps) continue;
                const auto idx = static_cast<std::size_t>(j) * width + static_cast<std::size_t>(i);
                grid[idx] = w0 * d[f[0]] + w1 * d[f[1]] + w2 * d[f[2]];
                covered[idx] = 1;
                any = true;
            }
        }
    }
    if (!any) {
        throw InvalidArgument("no active triangle covers any pixel of the " + std::to_string(width) + "x" +
                              std::to_string(height) + " grid");
    }
    fill_holes(grid, covered, width, height);

    const auto [lo, hi] = std::minmax_element(grid.begin(), grid.end());
    const double min_mm = *lo;
    const double max_mm = *hi;
    std::vector<double> values(grid.size(), 0.0);
    if (max_mm - min_mm >= 1e-12) {
        const double range = max_mm - min_mm;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            values[i] = std::clamp((grid[i] - min_mm) / range, 0.0, 1.0);
        }
    }
    return {Heightfield(width, height, std::move(values), 16), min_mm, max_mm,
            raw_displacement_stats(original, modified, verts)};
}

}  // namespace tactile
