#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "tactile/error.hpp"
#include "tactile/mesh.hpp"

namespace tactile {

namespace {

constexpr std::uint32_t kNone = 0xffffffffu;

struct Corner {
    std::uint32_t v = kNone;
    std::uint32_t vt = kNone;
    std::uint32_t vn = kNone;

    friend bool operator<(const Corner& a, const Corner& b) {
        return std::tie(a.v, a.vt, a.vn) < std::tie(b.v, b.vt, b.vn);
    }
};

std::vector<std::string_view> split_ws(std::string_view line) {
    std::vector<std::string_view> tokens;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
        std::size_t j = i;
        while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
        if (j > i) tokens.push_back(line.substr(i, j - i));
        i = j;
    }
    return tokens;
}

class ObjParser {
public:
    ObjParser(std::string source, Diagnostics* diagnostics)
        : source_(std::move(source)), diagnostics_(diagnostics) {}

    void parse_line(std::string_view line) {
        ++line_no_;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        const auto tokens = split_ws(line);
        if (tokens.empty()) return;
        const std::string_view tag = tokens[0];
        if (tag == "v") {
            if (tokens.size() != 4 && tokens.size() != 7) {
                fail("'v' record needs 3 coordinates (optionally followed by r g b)");
            }
            positions_.push_back({number(tokens[1]), number(tokens[2]), number(tokens[3])});
            if (tokens.size() == 7) {
                colors_.push_back({number(tokens[4]), number(tokens[5]), number(tokens[6])});
            } else {
                ++colorless_;
            }
        } else if (tag == "vt") {
            if (tokens.size() < 3 || tokens.size() > 4) fail("'vt' record needs 2 coordinates");
            texcoords_.push_back({number(tokens[1]), number(tokens[2])});
        } else if (tag == "vn") {
            if (tokens.size() != 4) fail("'vn' record needs 3 coordinates");
            normals_.push_back({number(tokens[1]), number(tokens[2]), number(tokens[3])});
        } else if (tag == "f") {
            if (tokens.size() < 4) fail("'f' record needs at least 3 vertices");
            std::vector<Corner> poly;
            poly.reserve(tokens.size() - 1);
            for (std::size_t i = 1; i < tokens.size(); ++i) poly.push_back(corner(tokens[i]));
            for (std::size_t i = 1; i + 1 < poly.size(); ++i) {
                tris_.push_back({poly[0], poly[i], poly[i + 1]});
                tri_groups_.push_back(current_group_);
            }
        } else if (tag == "g") {
            const std::string name = tokens.size() > 1 ? std::string(tokens[1]) : "default";
            current_group_ = group_id(name);
        }
        // o, s, usemtl, mtllib, l, p and vendor extensions carry nothing we model.
    }

    TriMesh finish() {
        if (tris_.empty()) {
            throw ParseError(source_, 0, "mesh has no faces");
        }
        bool all_vt = true;
        bool any_vt = false;
        bool all_vn = true;
        bool identity = true;
        for (const auto& tri : tris_) {
            for (const Corner& c : tri) {
                all_vt = all_vt && c.vt != kNone;
                any_vt = any_vt || c.vt != kNone;
                all_vn = all_vn && c.vn != kNone;
                identity = identity && (c.vt == kNone || c.vt == c.v) && (c.vn == kNone || c.vn == c.v);
            }
        }
        if (any_vt && !all_vt) {
            warn("some face corners lack texture coordinates; uvs dropped");
        }
        const bool use_colors = !colors_.empty() && colorless_ == 0;
        if (!colors_.empty() && colorless_ > 0) {
            warn("only some vertices carry colors; colors dropped");
        }

        TriMesh mesh;
        std::vector<Vec2> uvs;
        std::vector<Vec3> colors;
        std::vector<Vec3> normals;
        if (identity) {
            // Every corner reuses its position index for vt/vn: keep the
            // vertex list verbatim, isolated vertices included.
            mesh.vertices = positions_;
            if (all_vt) {
                if (texcoords_.size() < positions_.size()) {
                    // vt indices equal v indices, so unreferenced tail vertices
                    // have no coordinates of their own.
                    texcoords_.resize(positions_.size(), Vec2{});
                }
                uvs.assign(texcoords_.begin(), texcoords_.begin() + static_cast<std::ptrdiff_t>(positions_.size()));
            }
            if (all_vn) {
                normals_.resize(std::max(normals_.size(), positions_.size()), Vec3{0.0, 0.0, 1.0});
                normals.assign(normals_.begin(), normals_.begin() + static_cast<std::ptrdiff_t>(positions_.size()));
            }
            if (use_colors) colors = colors_;
            for (const auto& tri : tris_) {
                mesh.faces.push_back({tri[0].v, tri[1].v, tri[2].v});
            }
        } else {
            std::map<Corner, std::uint32_t> remap;
            for (const auto& tri : tris_) {
                Face face{};
                for (int k = 0; k < 3; ++k) {
                    Corner key = tri[k];
                    if (!all_vt) key.vt = kNone;
                    if (!all_vn) key.vn = kNone;
                    auto [it, inserted] =
                        remap.emplace(key, static_cast<std::uint32_t>(mesh.vertices.size()));
                    if (inserted) {
                        mesh.vertices.push_back(positions_[key.v]);
                        if (all_vt) uvs.push_back(texcoords_[key.vt]);
                        if (all_vn) normals.push_back(normals_[key.vn]);
                        if (use_colors) colors.push_back(colors_[key.v]);
                    }
                    face[k] = it->second;
                }
                mesh.faces.push_back(face);
            }
        }
        if (all_vt) mesh.uvs = std::move(uvs);
        if (use_colors) mesh.colors = std::move(colors);
        if (!group_names_.empty()) {
            mesh.group_names = group_names_;
            mesh.face_groups.reserve(tri_groups_.size());
            for (std::uint32_t g : tri_groups_) {
                mesh.face_groups.push_back(g == kNone ? group_id_in(mesh, "default") : g);
            }
        }

        bool normals_ok = all_vn;
        if (normals_ok) {
            for (Vec3& n : normals) {
                const double len = length(n);
                if (!(len > 0.0) || !std::isfinite(len)) {
                    normals_ok = false;
                    break;
                }
                n *= 1.0 / len;
            }
        }
        if (normals_ok) {
            mesh.normals = std::move(normals);
        } else {
            if (all_vn) warn("degenerate vertex normals in file; normals recomputed");
            mesh = compute_normals(mesh, diagnostics_);
        }
        validate(mesh);
        return mesh;
    }

private:
    [[noreturn]] void fail(const std::string& message) const {
        throw ParseError(source_, line_no_, message);
    }

    void warn(const std::string& message) const {
        if (diagnostics_) diagnostics_->warnings.push_back(source_ + ": " + message);
    }

    double number(std::string_view tok) const {
        double value = 0.0;
        const char* end = tok.data() + tok.size();
        const char* begin = tok.data();
        if (!tok.empty() && tok[0] == '+') ++begin;
        auto [ptr, ec] = std::from_chars(begin, end, value);
        if (ec != std::errc() || ptr != end) {
            fail("malformed number '" + std::string(tok) + "'");
        }
        if (!std::isfinite(value)) fail("non-finite number '" + std::string(tok) + "'");
        return value;
    }

    std::uint32_t index(std::string_view tok, std::size_t count, const char* what) const {
        long long raw = 0;
        auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), raw);
        if (ec != std::errc() || ptr != tok.data() + tok.size() || raw == 0) {
            fail(std::string("malformed ") + what + " index '" + std::string(tok) + "'");
        }
        // Negative indices count back from the most recent element.
        const long long resolved = raw > 0 ? raw - 1 : static_cast<long long>(count) + raw;
        if (resolved < 0 || resolved >= static_cast<long long>(count)) {
            fail(std::string(what) + " index " + std::to_string(raw) + " out of range (have " +
                 std::to_string(count) + ")");
        }
        return static_cast<std::uint32_t>(resolved);
    }

    Corner corner(std::string_view tok) const {
        Corner c;
        const auto s1 = tok.find('/');
        c.v = index(tok.substr(0, s1), positions_.size(), "vertex");
        if (s1 == std::string_view::npos) return c;
        const auto rest = tok.substr(s1 + 1);
        const auto s2 = rest.find('/');
        const auto vt = rest.substr(0, s2);
        if (!vt.empty()) c.vt = index(vt, texcoords_.size(), "texcoord");
        if (s2 != std::string_view::npos) {
            const auto vn = rest.substr(s2 + 1);
            if (!vn.empty()) c.vn = index(vn, normals_.size(), "normal");
        }
        return c;
    }

    std::uint32_t group_id(const std::string& name) {
        const auto it = std::find(group_names_.begin(), group_names_.end(), name);
        if (it != group_names_.end()) return static_cast<std::uint32_t>(it - group_names_.begin());
        group_names_.push_back(name);
        return static_cast<std::uint32_t>(group_names_.size() - 1);
    }

    static std::uint32_t group_id_in(TriMesh& mesh, const std::string& name) {
        const auto it = std::find(mesh.group_names.begin(), mesh.group_names.end(), name);
        if (it != mesh.group_names.end()) return static_cast<std::uint32_t>(it - mesh.group_names.begin());
        mesh.group_names.push_back(name);
        return static_cast<std::uint32_t>(mesh.group_names.size() - 1);
    }

    std::string source_;
    Diagnostics* diagnostics_;
    std::size_t line_no_ = 0;
    std::vector<Vec3> positions_;
    std::vector<Vec3> colors_;
    std::size_t colorless_ = 0;
    std::vector<Vec2> texcoords_;
    std::vector<Vec3> normals_;
    std::vector<std::array<Corner, 3>> tris_;
    std::vector<std::uint32_t> tri_groups_;
    std::vector<std::string> group_names_;
    std::uint32_t current_group_ = kNone;
};

// Shortest representation that parses back to the identical double.
void put_number(std::string& buf, double value) {
    char tmp[32];
    auto [ptr, ec] = std::to_chars(tmp, tmp + sizeof(tmp), value);
    buf.append(tmp, ptr);
}

void put_index(std::string& buf, std::uint32_t value) {
    char tmp[16];
    auto [ptr, ec] = std::to_chars(tmp, tmp + sizeof(tmp), value);
    buf.append(tmp, ptr);
}

}  // namespace

TriMesh parse_obj(std::istream& in, const std::string& source_name, Diagnostics* diagnostics) {
    ObjParser parser(source_name, diagnostics);
    std::string line;
    while (std::getline(in, line)) {
        parser.parse_line(line);
    }
    return parser.finish();
}

TriMesh load_obj(const std::filesystem::path& path, Diagnostics* diagnostics) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    return parse_obj(in, path.string(), diagnostics);
}

void write_obj(const TriMesh& mesh, std::ostream& out) {
    validate(mesh);
    std::string buf;
    buf.reserve(mesh.vertices.size() * 96 + mesh.faces.size() * 40);
    buf += "# tactile OBJ\n";
    for (std::size_t i = 0; i < mesh.vertices.size(); ++i) {
        const Vec3& p = mesh.vertices[i];
        buf += "v ";
        put_number(buf, p.x);
        buf += ' ';
        put_number(buf, p.y);
        buf += ' ';
        put_number(buf, p.z);
        if (mesh.colors) {
            const Vec3& c = (*mesh.colors)[i];
            buf += ' ';
            put_number(buf, c.x);
            buf += ' ';
            put_number(buf, c.y);
            buf += ' ';
            put_number(buf, c.z);
        }
        buf += '\n';
    }
    if (mesh.uvs) {
        for (const Vec2& t : *mesh.uvs) {
            buf += "vt ";
            put_number(buf, t.u);
            buf += ' ';
            put_number(buf, t.v);
            buf += '\n';
        }
    }
    for (const Vec3& n : mesh.normals) {
        buf += "vn ";
        put_number(buf, n.x);
        buf += ' ';
        put_number(buf, n.y);
        buf += ' ';
        put_number(buf, n.z);
        buf += '\n';
    }
    std::uint32_t group = kNone;
    for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
        if (mesh.has_groups() && mesh.face_groups[f] != group) {
            group = mesh.face_groups[f];
            buf += "g ";
            buf += mesh.group_names[group];
            buf += '\n';
        }
        buf += 'f';
        for (std::uint32_t v : mesh.faces[f]) {
            buf += ' ';
            put_index(buf, v + 1);
            buf += '/';
            if (mesh.uvs) put_index(buf, v + 1);
            buf += '/';
            put_index(buf, v + 1);
        }
        buf += '\n';
    }
    out << buf;
}

void save_obj(const TriMesh& mesh, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot write " + path.string());
    }
    write_obj(mesh, out);
    if (!out) {
        throw IoError("write failed for " + path.string());
    }
}

}  // namespace tactile
