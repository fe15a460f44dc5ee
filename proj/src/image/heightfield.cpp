#include "tactile/heightfield.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tactile/error.hpp"
#include "tactile/png_codec.hpp"

namespace tactile {

namespace {

constexpr double kLumaR = 0.2126;
constexpr double kLumaG = 0.7152;
constexpr double kLumaB = 0.0722;

double max_code(int depth) { return depth == 16 ? 65535.0 : 255.0; }

void check_depth(int depth) {
    if (depth != 8 && depth != 16) {
        throw InvalidArgument("bit depth must be 8 or 16, got " + std::to_string(depth));
    }
}

void check_turns(int quarter_turns) {
    if (quarter_turns < 0 || quarter_turns > 3) {
        throw InvalidArgument("quarter_turns must be in {0,1,2,3}, got " + std::to_string(quarter_turns));
    }
}

// Continuous pixel coordinate for a normalized coordinate, clamped so that
// [0, n-1] covers the pixel centers.
struct Tap {
    std::size_t i0;
    std::size_t i1;
    double t;
};

Tap tap(double coord, std::size_t n) {
    double c = std::clamp(coord, 0.0, 1.0) * static_cast<double>(n) - 0.5;
    c = std::clamp(c, 0.0, static_cast<double>(n - 1));
    const auto i0 = static_cast<std::size_t>(std::floor(c));
    const std::size_t i1 = std::min(i0 + 1, n - 1);
    return {i0, i1, c - static_cast<double>(i0)};
}

template <typename T, typename Get>
std::vector<T> rotate_once(std::size_t w, std::size_t h, Get get) {
    // Output is h wide and w tall.
    std::vector<T> out(w * h);
    for (std::size_t y = 0; y < w; ++y) {
        for (std::size_t x = 0; x < h; ++x) {
            out[y * h + x] = get(w - 1 - y, x);
        }
    }
    return out;
}

}  // namespace

Heightfield::Heightfield(std::size_t width, std::size_t height, std::vector<double> values, int source_depth)
    : width_(width), height_(height), values_(std::move(values)), source_depth_(source_depth) {
    if (width_ == 0 || height_ == 0) {
        throw InvalidArgument("heightfield dimensions must be positive");
    }
    if (values_.size() != width_ * height_) {
        throw InvalidArgument("heightfield has " + std::to_string(values_.size()) + " values for " +
                              std::to_string(width_) + "x" + std::to_string(height_) + " pixels");
    }
    check_depth(source_depth_);
    for (double v : values_) {
        if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
            throw InvalidArgument("heightfield value outside [0,1]: " + std::to_string(v));
        }
    }
}

Heightfield Heightfield::constant(std::size_t width, std::size_t height, double value, int source_depth) {
    return Heightfield(width, height, std::vector<double>(width * height, value), source_depth);
}

TextureImage::TextureImage(std::size_t width, std::size_t height, std::vector<Rgb> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
    if (width_ == 0 || height_ == 0) {
        throw InvalidArgument("texture dimensions must be positive");
    }
    if (pixels_.size() != width_ * height_) {
        throw InvalidArgument("texture pixel count does not match its dimensions");
    }
    for (const Rgb& p : pixels_) {
        for (double c : {p.r, p.g, p.b}) {
            if (!std::isfinite(c) || c < 0.0 || c > 1.0) {
                throw InvalidArgument("texture channel outside [0,1]");
            }
        }
    }
}

std::uint16_t quantize(double value, int depth) {
    check_depth(depth);
    const double scaled = std::floor(std::clamp(value, 0.0, 1.0) * max_code(depth) + 0.5);
    return static_cast<std::uint16_t>(scaled);
}

Heightfield decode_heightfield(std::span<const std::uint8_t> png, const std::string& source) {
    const RasterImage img = decode_png(png, source);
    const double scale = 1.0 / max_code(img.bit_depth);
    const std::size_t count = static_cast<std::size_t>(img.width) * img.height;
    std::vector<double> values(count);
    if (img.channels == 1) {
        for (std::size_t i = 0; i < count; ++i) values[i] = img.samples[i] * scale;
    } else {
        for (std::size_t i = 0; i < count; ++i) {
            const double y = kLumaR * img.samples[3 * i] + kLumaG * img.samples[3 * i + 1] +
                             kLumaB * img.samples[3 * i + 2];
            values[i] = std::clamp(y * scale, 0.0, 1.0);
        }
    }
    return Heightfield(img.width, img.height, std::move(values), img.bit_depth);
}

Heightfield load_heightfield(const std::filesystem::path& path) {
    return decode_heightfield(read_file_bytes(path), path.string());
}

std::vector<std::uint8_t> encode_heightfield(const Heightfield& field, int depth) {
    check_depth(depth);
    RasterImage img;
    img.width = static_cast<std::uint32_t>(field.width());
    img.height = static_cast<std::uint32_t>(field.height());
    img.channels = 1;
    img.bit_depth = depth;
    img.samples.reserve(field.size());
    for (double v : field.values()) img.samples.push_back(quantize(v, depth));
    return encode_png(img);
}

void save_heightfield(const Heightfield& field, const std::filesystem::path& path, int depth) {
    write_file_bytes(path, encode_heightfield(field, depth));
}

TextureImage decode_texture(std::span<const std::uint8_t> png, const std::string& source) {
    const RasterImage img = decode_png(png, source);
    const double scale = 1.0 / max_code(img.bit_depth);
    const std::size_t count = static_cast<std::size_t>(img.width) * img.height;
    std::vector<Rgb> pixels(count);
    for (std::size_t i = 0; i < count; ++i) {
        if (img.channels == 1) {
            const double g = img.samples[i] * scale;
            pixels[i] = {g, g, g};
        } else {
            pixels[i] = {img.samples[3 * i] * scale, img.samples[3 * i + 1] * scale,
                         img.samples[3 * i + 2] * scale};
        }
    }
    return TextureImage(img.width, img.height, std::move(pixels));
}

TextureImage load_texture(const std::filesystem::path& path) {
    return decode_texture(read_file_bytes(path), path.string());
}

std::vector<std::uint8_t> encode_texture(const TextureImage& texture) {
    RasterImage img;
    img.width = static_cast<std::uint32_t>(texture.width());
    img.height = static_cast<std::uint32_t>(texture.height());
    img.channels = 3;
    img.bit_depth = 8;
    img.samples.reserve(texture.pixels().size() * 3);
    for (const Rgb& p : texture.pixels()) {
        img.samples.push_back(quantize(p.r, 8));
        img.samples.push_back(quantize(p.g, 8));
        img.samples.push_back(quantize(p.b, 8));
    }
    return encode_png(img);
}

void save_texture(const TextureImage& texture, const std::filesystem::path& path) {
    write_file_bytes(path, encode_texture(texture));
}

Heightfield rotate90(const Heightfield& field, int quarter_turns) {
    check_turns(quarter_turns);
    Heightfield out = field;
    for (int t = 0; t < quarter_turns; ++t) {
        const std::size_t w = out.width();
        const std::size_t h = out.height();
        auto values = rotate_once<double>(w, h, [&](std::size_t x, std::size_t y) { return out.at(x, y); });
        out = Heightfield(h, w, std::move(values), out.source_depth());
    }
    return out;
}

TextureImage rotate90(const TextureImage& texture, int quarter_turns) {
    check_turns(quarter_turns);
    TextureImage out = texture;
    for (int t = 0; t < quarter_turns; ++t) {
        const std::size_t w = out.width();
        const std::size_t h = out.height();
        auto pixels = rotate_once<Rgb>(w, h, [&](std::size_t x, std::size_t y) { return out.at(x, y); });
        out = TextureImage(h, w, std::move(pixels));
    }
    return out;
}

double sample_bilinear(const Heightfield& field, double u, double v) {
    const Tap tx = tap(u, field.width());
    const Tap ty = tap(v, field.height());
    const double top = field.at(tx.i0, ty.i0) + tx.t * (field.at(tx.i1, ty.i0) - field.at(tx.i0, ty.i0));
    const double bottom = field.at(tx.i0, ty.i1) + tx.t * (field.at(tx.i1, ty.i1) - field.at(tx.i0, ty.i1));
    return top + ty.t * (bottom - top);
}

Rgb sample_bilinear(const TextureImage& texture, double u, double v) {
    const Tap tx = tap(u, texture.width());
    const Tap ty = tap(v, texture.height());
    auto lerp = [](const Rgb& a, const Rgb& b, double t) {
        return Rgb{a.r + t * (b.r - a.r), a.g + t * (b.g - a.g), a.b + t * (b.b - a.b)};
    };
    const Rgb top = lerp(texture.at(tx.i0, ty.i0), texture.at(tx.i1, ty.i0), tx.t);
    const Rgb bottom = lerp(texture.at(tx.i0, ty.i1), texture.at(tx.i1, ty.i1), tx.t);
    return lerp(top, bottom, ty.t);
}

Heightfield resample(const Heightfield& field, std::size_t width, std::size_t height) {
    if (width == field.width() && height == field.height()) return field;
    if (width == 0 || height == 0) throw InvalidArgument("resample target must be non-empty");
    std::vector<double> values(width * height);
    for (std::size_t y = 0; y < height; ++y) {
        const double v = (static_cast<double>(y) + 0.5) / static_cast<double>(height);
        for (std::size_t x = 0; x < width; ++x) {
            const double u = (static_cast<double>(x) + 0.5) / static_cast<double>(width);
            values[y * width + x] = std::clamp(sample_bilinear(field, u, v), 0.0, 1.0);
        }
    }
    return Heightfield(width, height, std::move(values), field.source_depth());
}

TextureImage resample(const TextureImage& texture, std::size_t width, std::size_t height) {
    if (width == texture.width() && height == texture.height()) return texture;
    if (width == 0 || height == 0) throw InvalidArgument("resample target must be non-empty");
    std::vector<Rgb> pixels(width * height);
    for (std::size_t y = 0; y < height; ++y) {
        const double v = (static_cast<double>(y) + 0.5) / static_cast<double>(height);
        for (std::size_t x = 0; x < width; ++x) {
            const double u = (static_cast<double>(x) + 0.5) / static_cast<double>(width);
            Rgb p = sample_bilinear(texture, u, v);
            p = {std::clamp(p.r, 0.0, 1.0), std::clamp(p.g, 0.0, 1.0), std::clamp(p.b, 0.0, 1.0)};
            pixels[y * width + x] = p;
        }
    }
    return TextureImage(width, height, std::move(pixels));
}

Heightfield luminance(const TextureImage& texture) {
    std::vector<double> values;
    values.reserve(texture.pixels().size());
    for (const Rgb& p : texture.pixels()) {
        values.push_back(std::clamp(kLumaR * p.r + kLumaG * p.g + kLumaB * p.b, 0.0, 1.0));
    }
    return Heightfield(texture.width(), texture.height(), std::move(values), 16);
}

}  // namespace tactile
