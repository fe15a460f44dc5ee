#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace tactile {

// Decoded PNG pixels. Samples are row-major and channel-interleaved; for
// 8-bit images they lie in [0,255], for 16-bit in [0,65535].
struct RasterImage {
    std::uint32_t width = 0;
    std::uint32_t height = 0;
    int channels = 1;  // 1 (gray) or 3 (rgb)
    int bit_depth = 8;  // 8 or 16
    std::vector<std::uint16_t> samples;
};

// Palette and low-bit-depth images are expanded to 8-bit, alpha is
// discarded. Throws ParseError on malformed data.
RasterImage decode_png(std::span<const std::uint8_t> bytes, const std::string& source = "<memory>");
RasterImage read_png(const std::filesystem::path& path);

std::vector<std::uint8_t> encode_png(const RasterImage& image);
void write_png(const RasterImage& image, const std::filesystem::path& path);

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path);
void write_file_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

}  // namespace tactile
