#include "tactile/png_codec.hpp"

#include <png.h>

#include <csetjmp>
#include <cstring>
#include <fstream>

#include "tactile/error.hpp"

namespace tactile {

namespace {

// libpng reports errors through longjmp. Everything that owns memory lives
// in these state structs, outside the frame that calls setjmp, so a jump
// never skips a destructor.
struct ReadState {
    std::span<const std::uint8_t> input;
    std::size_t offset = 0;
    std::vector<std::uint8_t> pixels;
    std::vector<png_bytep> rows;
    char message[256] = {};
    std::jmp_buf jump;
};

struct WriteState {
    std::vector<std::uint8_t> output;
    std::vector<std::uint8_t> pixels;
    std::vector<png_bytep> rows;
    char message[256] = {};
    std::jmp_buf jump;
};

template <typename State>
[[noreturn]] void on_error(png_structp png, png_const_charp msg) {
    auto* state = static_cast<State*>(png_get_error_ptr(png));
    std::strncpy(state->message, msg, sizeof(state->message) - 1);
    std::longjmp(state->jump, 1);
}

void on_warning(png_structp, png_const_charp) {}

void read_bytes(png_structp png, png_bytep out, png_size_t length) {
    auto* state = static_cast<ReadState*>(png_get_io_ptr(png));
    if (state->offset + length > state->input.size()) {
        png_error(png, "unexpected end of data");
    }
    std::memcpy(out, state->input.data() + state->offset, length);
    state->offset += length;
}

void write_bytes(png_structp png, png_bytep data, png_size_t length) {
    auto* state = static_cast<WriteState*>(png_get_io_ptr(png));
    state->output.insert(state->output.end(), data, data + length);
}

void flush_noop(png_structp) {}

bool decode_into(ReadState* state, RasterImage* out) {
    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, state, on_error<ReadState>, on_warning);
    if (png == nullptr) return false;
    png_infop info = png_create_info_struct(png);
    if (info == nullptr) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        return false;
    }
    if (setjmp(state->jump)) {
        png_destroy_read_struct(&png, &info, nullptr);
        return false;
    }
    png_set_read_fn(png, state, read_bytes);
    png_read_info(png, info);

    const png_byte color_type = png_get_color_type(png, info);
    const png_byte depth = png_get_bit_depth(png, info);
    if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
    if (color_type == PNG_COLOR_TYPE_GRAY && depth < 8) png_set_expand_gray_1_2_4_to_8(png);
    if (color_type & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(png);
    png_read_update_info(png, info);

    out->width = png_get_image_width(png, info);
    out->height = png_get_image_height(png, info);
    out->channels = png_get_channels(png, info);
    out->bit_depth = png_get_bit_depth(png, info);
    if ((out->channels != 1 && out->channels != 3) || (out->bit_depth != 8 && out->bit_depth != 16)) {
        std::strncpy(state->message, "unsupported pixel layout", sizeof(state->message) - 1);
        png_destroy_read_struct(&png, &info, nullptr);
        return false;
    }
    const std::size_t row_bytes = png_get_rowbytes(png, info);
    state->pixels.resize(row_bytes * out->height);
    state->rows.resize(out->height);
    for (std::uint32_t y = 0; y < out->height; ++y) {
        state->rows[y] = state->pixels.data() + y * row_bytes;
    }
    png_read_image(png, state->rows.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);
    return true;
}

bool encode_into(WriteState* state, const RasterImage* image) {
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, state, on_error<WriteState>, on_warning);
    if (png == nullptr) return false;
    png_infop info = png_create_info_struct(png);
    if (info == nullptr) {
        png_destroy_write_struct(&png, nullptr);
        return false;
    }
    if (setjmp(state->jump)) {
        png_destroy_write_struct(&png, &info);
        return false;
    }
    png_set_write_fn(png, state, write_bytes, flush_noop);
    png_set_IHDR(png, info, image->width, image->height, image->bit_depth,
                 image->channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    png_write_image(png, state->rows.data());
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
    return true;
}

}  // namespace

RasterImage decode_png(std::span<const std::uint8_t> bytes, const std::string& source) {
    if (bytes.size() < 8 || png_sig_cmp(bytes.data(), 0, 8) != 0) {
        throw ParseError(source, 0, "not a PNG image");
    }
    ReadState state;
    state.input = bytes;
    RasterImage image;
    if (!decode_into(&state, &image)) {
        throw ParseError(source, 0, std::string("PNG decode failed: ") + state.message);
    }
    const std::size_t count = static_cast<std::size_t>(image.width) * image.height * image.channels;
    image.samples.resize(count);
    if (image.bit_depth == 8) {
        for (std::size_t i = 0; i < count; ++i) image.samples[i] = state.pixels[i];
    } else {
        for (std::size_t i = 0; i < count; ++i) {
            image.samples[i] = static_cast<std::uint16_t>((state.pixels[2 * i] << 8) | state.pixels[2 * i + 1]);
        }
    }
    return image;
}

RasterImage read_png(const std::filesystem::path& path) {
    const auto bytes = read_file_bytes(path);
    return decode_png(bytes, path.string());
}

std::vector<std::uint8_t> encode_png(const RasterImage& image) {
    if (image.width == 0 || image.height == 0) throw InvalidArgument("cannot encode an empty image");
    if (image.channels != 1 && image.channels != 3) throw InvalidArgument("PNG channels must be 1 or 3");
    if (image.bit_depth != 8 && image.bit_depth != 16) throw InvalidArgument("PNG depth must be 8 or 16");
    const std::size_t count = static_cast<std::size_t>(image.width) * image.height * image.channels;
    if (image.samples.size() != count) throw InvalidArgument("sample count does not match dimensions");

    WriteState state;
    const std::size_t bytes_per_sample = image.bit_depth == 16 ? 2 : 1;
    state.pixels.resize(count * bytes_per_sample);
    for (std::size_t i = 0; i < count; ++i) {
        const std::uint16_t s = image.samples[i];
        if (bytes_per_sample == 1) {
            if (s > 255) throw InvalidArgument("8-bit sample out of range");
            state.pixels[i] = static_cast<std::uint8_t>(s);
        } else {
            state.pixels[2 * i] = static_cast<std::uint8_t>(s >> 8);
            state.pixels[2 * i + 1] = static_cast<std::uint8_t>(s & 0xff);
        }
    }
    const std::size_t row_bytes = static_cast<std::size_t>(image.width) * image.channels * bytes_per_sample;
    state.rows.resize(image.height);
    for (std::uint32_t y = 0; y < image.height; ++y) state.rows[y] = state.pixels.data() + y * row_bytes;
    if (!encode_into(&state, &image)) {
        throw Error("internal_error", std::string("PNG encode failed: ") + state.message);
    }
    return std::move(state.output);
}

void write_png(const RasterImage& image, const std::filesystem::path& path) {
    write_file_bytes(path, encode_png(image));
}

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return bytes;
}

void write_file_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace tactile
