#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include <json.hpp>

#include "tactile/dataset.hpp"
#include "tactile/error.hpp"
#include "tactile/hash.hpp"
#include "tactile/heightfield.hpp"

namespace tactile {

namespace fs = std::filesystem;
using nlohmann::json;

std::string to_string(Split split) {
    switch (split) {
        case Split::train: return "train";
        case Split::test: return "test";
        case Split::unassigned: break;
    }
    return "unassigned";
}

Split parse_split(const std::string& text) {
    if (text == "train") return Split::train;
    if (text == "test") return Split::test;
    if (text == "unassigned") return Split::unassigned;
    throw InvalidArgument("unknown split '" + text + "'");
}

fs::path DatasetManifest::resolve(const fs::path& p) const {
    if (p.is_absolute()) return p;
    return base_dir / p;
}

std::size_t DatasetManifest::count(Split split) const {
    return static_cast<std::size_t>(
        std::count_if(entries.begin(), entries.end(), [&](const DatasetEntry& e) { return e.split == split; }));
}

std::string serialize_manifest(const DatasetManifest& manifest, const fs::path& relative_to) {
    const fs::path anchor = fs::absolute(relative_to).lexically_normal();
    auto rel = [&](const fs::path& p) {
        const fs::path abs = fs::absolute(manifest.resolve(p)).lexically_normal();
        return abs.lexically_proximate(anchor).generic_string();
    };
    json doc;
    doc["schema_version"] = kManifestSchemaVersion;
    doc["seed"] = manifest.seed;
    doc["test_fraction"] = manifest.test_fraction;
    doc["categories"] = manifest.categories;
    json entries = json::array();
    for (const auto& e : manifest.entries) {
        entries.push_back({{"id", e.id},
                           {"texture", rel(e.texture)},
                           {"heightfield", rel(e.heightfield)},
                           {"category", e.category},
                           {"split", to_string(e.split)}});
    }
    doc["entries"] = std::move(entries);
    return doc.dump(2) + "\n";
}

DatasetManifest parse_manifest(const std::string& text, const fs::path& base_dir, const std::string& source) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(source, 0, e.what());
    }
    try {
        const int version = doc.at("schema_version").get<int>();
        if (version != kManifestSchemaVersion) {
            throw ParseError(source, 0, "unsupported schema_version " + std::to_string(version));
        }
        DatasetManifest m;
        m.base_dir = base_dir;
        m.seed = doc.value("seed", std::uint64_t{0});
        m.test_fraction = doc.value("test_fraction", 0.0);
        m.categories = doc.value("categories", std::vector<std::string>{});
        for (const auto& e : doc.at("entries")) {
            DatasetEntry entry;
            entry.id = e.at("id").get<std::string>();
            entry.texture = fs::path(e.at("texture").get<std::string>());
            entry.heightfield = fs::path(e.at("heightfield").get<std::string>());
            entry.category = e.at("category").get<std::string>();
            entry.split = parse_split(e.value("split", std::string("unassigned")));
            m.entries.push_back(std::move(entry));
        }
        return m;
    } catch (const json::exception& e) {
        throw ParseError(source, 0, e.what());
    } catch (const InvalidArgument& e) {
        throw ParseError(source, 0, e.what());
    }
}

DatasetManifest load_manifest(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open manifest " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    const fs::path base = path.has_parent_path() ? path.parent_path() : fs::path(".");
    return parse_manifest(buffer.str(), base, path.string());
}

void save_manifest(const DatasetManifest& manifest, const fs::path& path) {
    const fs::path dir = path.has_parent_path() ? path.parent_path() : fs::path(".");
    if (!dir.empty()) fs::create_directories(dir);
    const std::string text = serialize_manifest(manifest, dir);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write manifest " + path.string());
    out << text;
    if (!out) throw IoError("failed writing manifest " + path.string());
}

void validate(const DatasetManifest& manifest, bool check_files) {
    std::set<std::string> ids;
    const std::set<std::string> categories(manifest.categories.begin(), manifest.categories.end());
    for (const auto& e : manifest.entries) {
        if (e.id.empty()) throw InvalidArgument("manifest entry with empty id");
        if (!ids.insert(e.id).second) throw InvalidArgument("duplicate manifest id '" + e.id + "'");
        if (!categories.empty() && !categories.count(e.category)) {
            throw InvalidArgument("entry '" + e.id + "' has undeclared category '" + e.category + "'");
        }
        if (check_files) {
            for (const fs::path& p : {manifest.resolve(e.texture), manifest.resolve(e.heightfield)}) {
                if (!fs::is_regular_file(p)) {
                    throw InvalidArgument("entry '" + e.id + "' references missing file " + p.string());
                }
            }
        }
    }
}

std::string manifest_hash(const DatasetManifest& manifest) {
    Sha256 h;
    h.update(serialize_manifest(manifest, manifest.base_dir));
    for (const auto& e : manifest.entries) {
        h.update_file(manifest.resolve(e.texture));
        h.update_file(manifest.resolve(e.heightfield));
    }
    return h.hex_digest();
}

namespace {

std::uint64_t uniform_index(std::mt19937_64& rng, std::uint64_t bound) {
    // Rejection sampling keeps the draw unbiased and libstdc++-independent.
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t x;
    do {
        x = rng();
    } while (x >= limit);
    return x % bound;
}

}  // namespace

DatasetManifest assign_split(const DatasetManifest& manifest, double test_fraction, std::uint64_t seed,
                             Diagnostics* diagnostics) {
    if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
        throw InvalidArgument("test_fraction must lie strictly between 0 and 1");
    }
    DatasetManifest out = manifest;
    out.seed = seed;
    out.test_fraction = test_fraction;

    std::vector<std::string> order = manifest.categories;
    for (const auto& e : manifest.entries) {
        if (std::find(order.begin(), order.end(), e.category) == order.end()) order.push_back(e.category);
    }
    std::mt19937_64 rng(seed);
    for (const auto& category : order) {
        std::vector<std::size_t> members;
        for (std::size_t i = 0; i < out.entries.size(); ++i) {
            if (out.entries[i].category == category) members.push_back(i);
        }
        for (std::size_t i = members.size(); i > 1; --i) {
            std::swap(members[i - 1], members[uniform_index(rng, i)]);
        }
        const auto n_test = static_cast<std::size_t>(
            std::floor(static_cast<double>(members.size()) * test_fraction + 1e-9));
        if (n_test == 0 && !members.empty() && diagnostics) {
            diagnostics->warnings.push_back("category '" + category + "' has " + std::to_string(members.size()) +
                                            " entries, too few for a test item at this fraction");
        }
        for (std::size_t r = 0; r < members.size(); ++r) {
            out.entries[members[r]].split = r < n_test ? Split::test : Split::train;
        }
    }
    return out;
}

DatasetManifest augment_rotations(const DatasetManifest& manifest, const fs::path& output_dir) {
    DatasetManifest out = manifest;
    std::set<std::string> ids;
    for (const auto& e : manifest.entries) ids.insert(e.id);
    const fs::path root = fs::absolute(output_dir);
    bool created = false;
    for (const auto& e : manifest.entries) {
        if (e.split != Split::train) continue;
        if (!created) {
            fs::create_directories(root / "textures");
            fs::create_directories(root / "heightfields");
            created = true;
        }
        const TextureImage texture = load_texture(manifest.resolve(e.texture));
        const Heightfield field = load_heightfield(manifest.resolve(e.heightfield));
        for (int turns = 1; turns <= 3; ++turns) {
            DatasetEntry aug = e;
            aug.id = e.id + "_rot" + std::to_string(90 * turns);
            if (!ids.insert(aug.id).second) {
                throw InvalidArgument("augmented id '" + aug.id + "' collides with an existing entry");
            }
            aug.texture = root / "textures" / (aug.id + ".png");
            aug.heightfield = root / "heightfields" / (aug.id + ".png");
            save_texture(rotate90(texture, turns), aug.texture);
            save_heightfield(rotate90(field, turns), aug.heightfield, field.source_depth());
            out.entries.push_back(std::move(aug));
        }
    }
    return out;
}

}  // namespace tactile
