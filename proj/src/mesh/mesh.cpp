#include "tactile/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "tactile/error.hpp"

namespace tactile {

double BoundingBox::max_extent() const {
    const Vec3 e = extent();
    return std::max({e.x, e.y, e.z});
}

void validate(const TriMesh& mesh) {
    const std::size_t n = mesh.vertices.size();
    for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
        for (std::uint32_t idx : mesh.faces[f]) {
            if (idx >= n) {
                throw InvalidArgument("face " + std::to_string(f) + " references vertex " +
                                      std::to_string(idx) + " but mesh has " +
                                      std::to_string(n) + " vertices");
            }
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (!is_finite(mesh.vertices[i])) {
            throw InvalidArgument("vertex " + std::to_string(i) + " is not finite");
        }
    }
    if (mesh.normals.size() != n) {
        throw InvalidArgument("normal count " + std::to_string(mesh.normals.size()) +
                              " differs from vertex count " + std::to_string(n));
    }
    for (std::size_t i = 0; i < n; ++i) {
        const Vec3& nrm = mesh.normals[i];
        if (!is_finite(nrm) || std::abs(length(nrm) - 1.0) > 1e-6) {
            throw InvalidArgument("normal " + std::to_string(i) + " is not unit length");
        }
    }
    if (mesh.uvs) {
        if (mesh.uvs->size() != n) {
            throw InvalidArgument("uv count differs from vertex count");
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (!is_finite((*mesh.uvs)[i])) {
                throw InvalidArgument("uv " + std::to_string(i) + " is not finite");
            }
        }
    }
    if (mesh.colors && mesh.colors->size() != n) {
        throw InvalidArgument("color count differs from vertex count");
    }
    if (!mesh.face_groups.empty()) {
        if (mesh.face_groups.size() != mesh.faces.size()) {
            throw InvalidArgument("face group count differs from face count");
        }
        for (std::uint32_t g : mesh.face_groups) {
            if (g >= mesh.group_names.size()) {
                throw InvalidArgument("face group index out of range");
            }
        }
    }
}

BoundingBox bounding_box(const TriMesh& mesh) {
    if (mesh.vertices.empty()) {
        throw InvalidArgument("bounding box of an empty mesh");
    }
    constexpr double inf = std::numeric_limits<double>::infinity();
    BoundingBox box{{inf, inf, inf}, {-inf, -inf, -inf}};
    for (const Vec3& p : mesh.vertices) {
        for (int a = 0; a < 3; ++a) {
            box.min[a] = std::min(box.min[a], p[a]);
            box.max[a] = std::max(box.max[a], p[a]);
        }
    }
    return box;
}

double surface_area(const TriMesh& mesh) {
    double area = 0.0;
    for (const Face& f : mesh.faces) {
        const Vec3& a = mesh.vertices[f[0]];
        area += 0.5 * length(cross(mesh.vertices[f[1]] - a, mesh.vertices[f[2]] - a));
    }
    return area;
}

std::vector<std::uint32_t> group_vertices(const TriMesh& mesh, std::string_view group) {
    const auto it = std::find(mesh.group_names.begin(), mesh.group_names.end(), group);
    if (it == mesh.group_names.end() || mesh.face_groups.empty()) {
        return {};
    }
    const auto gid = static_cast<std::uint32_t>(it - mesh.group_names.begin());
    std::vector<char> used(mesh.vertices.size(), 0);
    for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
        if (mesh.face_groups[f] == gid) {
            for (std::uint32_t v : mesh.faces[f]) used[v] = 1;
        }
    }
    std::vector<std::uint32_t> out;
    for (std::size_t i = 0; i < used.size(); ++i) {
        if (used[i]) out.push_back(static_cast<std::uint32_t>(i));
    }
    return out;
}

NormalizedMesh normalize_unit_cube(const TriMesh& mesh) {
    const BoundingBox box = bounding_box(mesh);
    const double extent = box.max_extent();
    if (!(extent > 0.0)) {
        throw InvalidArgument("cannot normalize a mesh with zero extent");
    }
    UnitCubeTransform transform;
    transform.scale = 1.0 / extent;
    transform.translation = -box.center();

    NormalizedMesh out{mesh, transform};
    for (Vec3& p : out.mesh.vertices) {
        p = transform.apply(p);
    }
    return out;
}

TriMesh denormalize(const TriMesh& mesh, const UnitCubeTransform& transform) {
    TriMesh out = mesh;
    for (Vec3& p : out.vertices) {
        p = transform.invert(p);
    }
    return out;
}

TriMesh compute_normals(const TriMesh& mesh, Diagnostics* diagnostics) {
    TriMesh out = mesh;
    std::vector<Vec3> acc(mesh.vertices.size());
    std::vector<char> touched(mesh.vertices.size(), 0);
    for (const Face& f : mesh.faces) {
        const Vec3& a = mesh.vertices[f[0]];
        // |cross| is twice the triangle area, so summing raw cross products
        // weights each face by its area.
        const Vec3 n = cross(mesh.vertices[f[1]] - a, mesh.vertices[f[2]] - a);
        for (std::uint32_t v : f) {
            acc[v] += n;
            touched[v] = 1;
        }
    }
    out.normals.assign(mesh.vertices.size(), Vec3{0.0, 0.0, 1.0});
    std::size_t isolated = 0;
    std::size_t degenerate = 0;
    for (std::size_t i = 0; i < acc.size(); ++i) {
        if (!touched[i]) {
            ++isolated;
            continue;
        }
        const double len = length(acc[i]);
        if (len > 0.0 && std::isfinite(len)) {
            out.normals[i] = acc[i] * (1.0 / len);
        } else {
            ++degenerate;
        }
    }
    if (diagnostics) {
        if (isolated > 0) {
            diagnostics->warnings.push_back(std::to_string(isolated) +
                                            " isolated vertices given +Z normals");
        }
        if (degenerate > 0) {
            diagnostics->warnings.push_back(std::to_string(degenerate) +
                                            " vertices with degenerate incident faces given +Z normals");
        }
    }
    return out;
}

TriMesh with_planar_uvs(const TriMesh& mesh) {
    const BoundingBox box = bounding_box(mesh);
    const Vec3 e = box.extent();
    int axes[3] = {0, 1, 2};
    std::sort(axes, axes + 3, [&](int a, int b) { return e[a] > e[b]; });
    const int au = std::min(axes[0], axes[1]);
    const int av = std::max(axes[0], axes[1]);

    TriMesh out = mesh;
    std::vector<Vec2> uvs(mesh.vertices.size());
    for (std::size_t i = 0; i < mesh.vertices.size(); ++i) {
        const Vec3& p = mesh.vertices[i];
        uvs[i].u = e[au] > 0.0 ? (p[au] - box.min[au]) / e[au] : 0.0;
        uvs[i].v = e[av] > 0.0 ? (p[av] - box.min[av]) / e[av] : 0.0;
    }
    out.uvs = std::move(uvs);
    return out;
}

}  // namespace tactile
