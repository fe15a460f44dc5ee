#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace tactile {

// Row-major grid of normalized heights in [0,1]. `source_depth` records the
// bit depth of the image the field came from (8 or 16).
class Heightfield {
public:
    // Throws InvalidArgument unless dimensions are positive, the value count
    // matches, and every value is finite and within [0,1].
    Heightfield(std::size_t width, std::size_t height, std::vector<double> values, int source_depth = 16);

    static Heightfield constant(std::size_t width, std::size_t height, double value, int source_depth = 16);

    std::size_t width() const { return width_; }
    std::size_t height() const { return height_; }
    std::size_t size() const { return values_.size(); }
    int source_depth() const { return source_depth_; }

    double at(std::size_t x, std::size_t y) const { return values_[y * width_ + x]; }
    std::span<const double> values() const { return values_; }

    friend bool operator==(const Heightfield&, const Heightfield&) = default;

private:
    std::size_t width_;
    std::size_t height_;
    std::vector<double> values_;
    int source_depth_;
};

struct Rgb {
    double r{};
    double g{};
    double b{};

    friend bool operator==(const Rgb&, const Rgb&) = default;
};

// Row-major RGB image with channels in [0,1].
class TextureImage {
public:
    TextureImage(std::size_t width, std::size_t height, std::vector<Rgb> pixels);

    std::size_t width() const { return width_; }
    std::size_t height() const { return height_; }
    const Rgb& at(std::size_t x, std::size_t y) const { return pixels_[y * width_ + x]; }
    std::span<const Rgb> pixels() const { return pixels_; }

    friend bool operator==(const TextureImage&, const TextureImage&) = default;

private:
    std::size_t width_;
    std::size_t height_;
    std::vector<Rgb> pixels_;
};

// round(v * (2^depth - 1)), halves rounded up.
std::uint16_t quantize(double value, int depth);

// Grayscale PNG (8 or 16 bit); RGB inputs are reduced by luminance.
Heightfield load_heightfield(const std::filesystem::path& path);
Heightfield decode_heightfield(std::span<const std::uint8_t> png, const std::string& source = "<memory>");

void save_heightfield(const Heightfield& field, const std::filesystem::path& path, int depth = 16);
std::vector<std::uint8_t> encode_heightfield(const Heightfield& field, int depth = 16);

// RGB PNG; grayscale inputs are replicated across channels.
TextureImage load_texture(const std::filesystem::path& path);
TextureImage decode_texture(std::span<const std::uint8_t> png, const std::string& source = "<memory>");

// Always written as 8-bit RGB.
void save_texture(const TextureImage& texture, const std::filesystem::path& path);
std::vector<std::uint8_t> encode_texture(const TextureImage& texture);

// Counter-clockwise rotation by quarter_turns * 90 degrees; quarter_turns in
// {0,1,2,3}. One turn maps out(x, y) = in(W-1-y, x).
Heightfield rotate90(const Heightfield& field, int quarter_turns);
TextureImage rotate90(const TextureImage& texture, int quarter_turns);

// Bilinear lookup with pixel centers at ((i+0.5)/W, (j+0.5)/H); u indexes
// columns, v indexes rows. Coordinates outside [0,1] are clamped.
double sample_bilinear(const Heightfield& field, double u, double v);
Rgb sample_bilinear(const TextureImage& texture, double u, double v);

// Bilinear resampling onto a width x height grid of pixel centers.
Heightfield resample(const Heightfield& field, std::size_t width, std::size_t height);
TextureImage resample(const TextureImage& texture, std::size_t width, std::size_t height);

// Rec.709 luma, clamped to [0,1].
Heightfield luminance(const TextureImage& texture);

}  // namespace tactile
