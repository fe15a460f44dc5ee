#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "tactile/mesh.hpp"

namespace tactile {

inline constexpr int kManifestSchemaVersion = 1;

enum class Split { unassigned, train, test };

std::string to_string(Split split);
Split parse_split(const std::string& text);

struct DatasetEntry {
    std::string id;
    // Relative paths resolve against DatasetManifest::base_dir.
    std::filesystem::path texture;
    std::filesystem::path heightfield;
    std::string category;
    Split split = Split::unassigned;
};

// On disk this is a JSON document:
//   {"schema_version": 1, "seed": 42, "test_fraction": 0.1,
//    "categories": ["wood", ...],
//    "entries": [{"id", "texture", "heightfield", "category", "split"}, ...]}
// with paths relative to the manifest file's directory.
struct DatasetManifest {
    std::uint64_t seed = 0;
    double test_fraction = 0.0;
    std::vector<std::string> categories;
    std::vector<DatasetEntry> entries;
    std::filesystem::path base_dir;  // not serialized

    std::filesystem::path resolve(const std::filesystem::path& p) const;
    std::size_t count(Split split) const;
};

DatasetManifest load_manifest(const std::filesystem::path& path);
DatasetManifest parse_manifest(const std::string& text, const std::filesystem::path& base_dir,
                               const std::string& source = "<manifest>");
// Paths are rewritten relative to the destination directory.
void save_manifest(const DatasetManifest& manifest, const std::filesystem::path& path);
std::string serialize_manifest(const DatasetManifest& manifest, const std::filesystem::path& relative_to);

// Unique ids, declared categories, and (when check_files) every referenced
// file exists. Throws InvalidArgument.
void validate(const DatasetManifest& manifest, bool check_files = true);

// SHA-256 over the serialized manifest and the bytes of every referenced
// file, in entry order.
std::string manifest_hash(const DatasetManifest& manifest);

// Stratified seeded split: per category, floor(n * test_fraction) entries
// go to test and the rest to train. Categories too small for one test entry
// contribute none and produce a warning.
DatasetManifest assign_split(const DatasetManifest& manifest, double test_fraction, std::uint64_t seed,
                             Diagnostics* diagnostics = nullptr);

// Writes three rotated copies (90, 180, 270 degrees CCW) of every train
// pair into output_dir and appends them as train entries with ids
// "<id>_rot90" etc. Test entries are untouched.
DatasetManifest augment_rotations(const DatasetManifest& manifest, const std::filesystem::path& output_dir);

inline const std::vector<std::string> kSyntheticCategories = {"parquet", "wood", "rocks", "walls", "roofs"};

// n procedurally generated pairs written under output_dir (textures/,
// heightfields/, manifest.json). Heights are smooth low-frequency relief;
// textures are independently drawn high-contrast patterns, so texture
// luminance is a poor predictor of height. Deterministic in seed.
DatasetManifest generate_synthetic_corpus(std::size_t n, std::size_t resolution, std::uint64_t seed,
                                          const std::filesystem::path& output_dir, unsigned threads = 1);

}  // namespace tactile
