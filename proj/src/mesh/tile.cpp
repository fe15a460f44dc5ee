#include <array>
#include <cmath>
#include <cstdint>

#include "tactile/error.hpp"
#include "tactile/mesh.hpp"

namespace tactile {

namespace {

std::size_t tile_face_count(std::size_t segments) {
    return 2 * segments * segments + 4 * (segments + 1) + 2;
}

constexpr std::size_t kMaxSegments = std::size_t{1} << 12;

}  // namespace

TriMesh make_tile(const Vec3& size_mm, std::size_t target_faces) {
    if (!(size_mm.x > 0.0 && size_mm.y > 0.0 && size_mm.z > 0.0) || !is_finite(size_mm)) {
        throw InvalidArgument("tile extents must be positive and finite");
    }
    std::size_t n = 1;
    while (tile_face_count(n) < target_faces) {
        n *= 2;
        if (n > kMaxSegments) {
            throw InvalidArgument("target face count " + std::to_string(target_faces) +
                                  " exceeds the tile resolution limit");
        }
    }

    TriMesh mesh;
    mesh.group_names = {std::string(kTopGroup), "side", "bottom"};
    const std::size_t row = n + 1;
    mesh.vertices.reserve(row * row + 4);
    for (std::size_t j = 0; j <= n; ++j) {
        for (std::size_t i = 0; i <= n; ++i) {
            // Exact endpoints so the rim lies precisely on the box edges.
            const double x = i == n ? size_mm.x : size_mm.x * static_cast<double>(i) / static_cast<double>(n);
            const double y = j == n ? size_mm.y : size_mm.y * static_cast<double>(j) / static_cast<double>(n);
            mesh.vertices.push_back({x, y, size_mm.z});
        }
    }
    auto top = [row](std::size_t i, std::size_t j) { return static_cast<std::uint32_t>(j * row + i); };
    const auto base = static_cast<std::uint32_t>(mesh.vertices.size());
    mesh.vertices.push_back({0.0, 0.0, 0.0});
    mesh.vertices.push_back({size_mm.x, 0.0, 0.0});
    mesh.vertices.push_back({size_mm.x, size_mm.y, 0.0});
    mesh.vertices.push_back({0.0, size_mm.y, 0.0});
    const std::uint32_t b00 = base, b10 = base + 1, b11 = base + 2, b01 = base + 3;

    auto add = [&mesh](std::uint32_t a, std::uint32_t b, std::uint32_t c, std::uint32_t group) {
        mesh.faces.push_back({a, b, c});
        mesh.face_groups.push_back(group);
    };

    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < n; ++i) {
            add(top(i, j), top(i + 1, j), top(i + 1, j + 1), 0);
            add(top(i, j), top(i + 1, j + 1), top(i, j + 1), 0);
        }
    }

    // Walls, counter-clockwise seen from above. Each fans from the bottom
    // corner under its first rim vertex.
    struct Wall {
        std::uint32_t bottom_start, bottom_end;
        std::size_t i0, j0;
        int di, dj;
    };
    const std::array<Wall, 4> walls{{
        {b00, b10, 0, 0, 1, 0},
        {b10, b11, n, 0, 0, 1},
        {b11, b01, n, n, -1, 0},
        {b01, b00, 0, n, 0, -1},
    }};
    for (const Wall& w : walls) {
        auto rim = [&](std::size_t m) {
            const auto i = static_cast<std::size_t>(static_cast<long long>(w.i0) + w.di * static_cast<long long>(m));
            const auto j = static_cast<std::size_t>(static_cast<long long>(w.j0) + w.dj * static_cast<long long>(m));
            return top(i, j);
        };
        for (std::size_t m = 0; m < n; ++m) {
            add(w.bottom_start, rim(m + 1), rim(m), 1);
        }
        add(w.bottom_start, w.bottom_end, rim(n), 1);
    }

    add(b00, b11, b10, 2);
    add(b00, b01, b11, 2);

    std::vector<Vec2> uvs;
    uvs.reserve(mesh.vertices.size());
    for (const Vec3& p : mesh.vertices) {
        uvs.push_back({p.x / size_mm.x, p.y / size_mm.y});
    }
    mesh.uvs = std::move(uvs);

    mesh = compute_normals(mesh);
    for (std::size_t k = 0; k < row * row; ++k) {
        mesh.normals[k] = {0.0, 0.0, 1.0};
    }
    return mesh;
}

}  // namespace tactile
