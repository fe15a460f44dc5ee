#include <doctest.h>

#include <algorithm>
#include <cstring>

#include "support.hpp"
#include "tactile/error.hpp"
#include "tactile/heightfield.hpp"
#include "tactile/png_codec.hpp"

using namespace tactile;

TEST_SUITE("heightfield") {
    TEST_CASE("constructor validates") {
        CHECK_THROWS_AS(Heightfield(0, 1, {}), InvalidArgument);
        CHECK_THROWS_AS(Heightfield(2, 2, {0, 0, 0}), InvalidArgument);
        CHECK_THROWS_AS(Heightfield(1, 1, {1.5}), InvalidArgument);
        CHECK_THROWS_AS(Heightfield(1, 1, {0.5}, 12), InvalidArgument);
        CHECK(Heightfield::constant(3, 2, 0.25).at(2, 1) == 0.25);
    }

    TEST_CASE("quantize rounds halves up") {
        CHECK(quantize(0.0, 16) == 0);
        CHECK(quantize(1.0, 16) == 65535);
        CHECK(quantize(0.5, 8) == 128);
        CHECK(quantize(127.49 / 255.0, 8) == 127);
        CHECK(quantize(2.0, 8) == 255);
    }

    TEST_CASE("16-bit PNG round trip is exact on the code grid") {
        testing::Rng rng(3);
        std::vector<double> v(37 * 23);
        for (double& x : v) x = std::floor(rng.uniform() * 65535.0) / 65535.0;
        const Heightfield h(37, 23, v);
        const Heightfield back = decode_heightfield(encode_heightfield(h));
        CHECK(back == h);
        CHECK(back.source_depth() == 16);
    }

    TEST_CASE("8-bit PNG round trip and depth") {
        std::vector<double> v = {0.0, 1.0, 128.0 / 255.0, 3.0 / 255.0};
        const Heightfield h(2, 2, v, 8);
        const Heightfield back = decode_heightfield(encode_heightfield(h, 8));
        CHECK(back.source_depth() == 8);
        CHECK(back == h);
    }

    TEST_CASE("RGB heightfields reduce by Rec.709 luminance") {
        RasterImage img;
        img.width = 1;
        img.height = 1;
        img.channels = 3;
        img.bit_depth = 8;
        img.samples = {255, 0, 0};
        const Heightfield h = decode_heightfield(encode_png(img));
        CHECK(h.at(0, 0) == doctest::Approx(0.2126).epsilon(1e-12));
    }

    TEST_CASE("16-bit samples are written big-endian") {
        RasterImage img;
        img.width = 2;
        img.height = 1;
        img.samples = {0x1234, 0xabcd};
        img.bit_depth = 16;
        const RasterImage back = decode_png(encode_png(img));
        CHECK(back.samples == img.samples);
    }

    TEST_CASE("corrupt PNG is rejected") {
        std::vector<std::uint8_t> junk = {0x89, 'P', 'N', 'G', 1, 2, 3};
        CHECK_THROWS_AS(decode_png(junk), ParseError);
        auto good = encode_heightfield(Heightfield::constant(4, 4, 0.5));
        good.resize(good.size() / 2);
        CHECK_THROWS(decode_png(good));
    }

    TEST_CASE("texture round trip") {
        testing::TempDir dir;
        std::vector<Rgb> px(6);
        for (std::size_t i = 0; i < px.size(); ++i) px[i] = {i / 255.0, (2 * i) / 255.0, 1.0};
        const TextureImage t(3, 2, px);
        save_texture(t, dir / "t.png");
        CHECK(load_texture(dir / "t.png") == t);
        CHECK_THROWS_AS(load_texture(dir / "missing.png"), IoError);
    }

    TEST_CASE("rotate90 maps out(x,y) = in(W-1-y, x)") {
        const Heightfield h(3, 2, {0.0, 0.1, 0.2, 0.3, 0.4, 0.5});
        const Heightfield r = rotate90(h, 1);
        REQUIRE(r.width() == 2);
        REQUIRE(r.height() == 3);
        for (std::size_t y = 0; y < 3; ++y) {
            for (std::size_t x = 0; x < 2; ++x) CHECK(r.at(x, y) == h.at(2 - y, x));
        }
        CHECK(rotate90(rotate90(h, 2), 2) == h);
        CHECK(rotate90(rotate90(h, 1), 3) == h);
        CHECK(rotate90(h, 0) == h);
        CHECK_THROWS_AS(rotate90(h, 4), InvalidArgument);
    }

    TEST_CASE("rotation preserves the value multiset") {
        const Heightfield h = testing::sinusoid_field(17, 11);
        for (int t = 1; t < 4; ++t) {
            auto a = std::vector<double>(h.values().begin(), h.values().end());
            const Heightfield r = rotate90(h, t);
            auto b = std::vector<double>(r.values().begin(), r.values().end());
            std::sort(a.begin(), a.end());
            std::sort(b.begin(), b.end());
            CHECK(a == b);
        }
    }

    TEST_CASE("bilinear sampling hits pixel centers and interpolates between them") {
        const Heightfield h(2, 2, {0.0, 1.0, 0.5, 0.25});
        CHECK(sample_bilinear(h, 0.25, 0.25) == 0.0);
        CHECK(sample_bilinear(h, 0.75, 0.25) == 1.0);
        CHECK(sample_bilinear(h, 0.25, 0.75) == 0.5);
        CHECK(sample_bilinear(h, 0.5, 0.25) == doctest::Approx(0.5));
        CHECK(sample_bilinear(h, 0.5, 0.5) == doctest::Approx((0.0 + 1.0 + 0.5 + 0.25) / 4));
        // Clamped outside the centers.
        CHECK(sample_bilinear(h, 0.0, 0.0) == 0.0);
        CHECK(sample_bilinear(h, -3.0, 9.0) == 0.5);
    }

    TEST_CASE("resample to the same size is the identity and upsampling a constant stays constant") {
        const Heightfield h = testing::sinusoid_field(9, 7);
        CHECK(resample(h, 9, 7) == h);
        const Heightfield c = resample(Heightfield::constant(3, 3, 0.375), 10, 4);
        for (double v : c.values()) CHECK(v == doctest::Approx(0.375).epsilon(1e-15));
    }

    TEST_CASE("luminance of a gray texture is the gray value") {
        std::vector<Rgb> px = {{0.2, 0.2, 0.2}, {0.9, 0.9, 0.9}};
        const Heightfield h = luminance(TextureImage(2, 1, px));
        CHECK(h.at(0, 0) == doctest::Approx(0.2).epsilon(1e-15));
        CHECK(h.at(1, 0) == doctest::Approx(0.9).epsilon(1e-15));
    }

    TEST_CASE("decoding maps pixel codes onto [0,1]") {
        RasterImage img;
        img.width = 3;
        img.height = 1;
        img.bit_depth = 8;
        img.samples = {255, 0, 128};
        const Heightfield h = decode_heightfield(encode_png(img));
        CHECK(h.at(0, 0) == 1.0);
        CHECK(h.at(1, 0) == 0.0);
        CHECK(h.at(2, 0) == doctest::Approx(128.0 / 255.0).epsilon(1e-15));
        img.bit_depth = 16;
        img.width = 1;
        img.samples = {65535};
        CHECK(decode_heightfield(encode_png(img)).at(0, 0) == 1.0);
        CHECK(quantize(1.0, 16) == 65535);
    }

    TEST_CASE("four single turns restore the grid") {
        const Heightfield h(2, 3, {0.0, 0.1, 0.2, 0.3, 0.4, 0.5});
        Heightfield r = h;
        for (int i = 0; i < 4; ++i) r = rotate90(r, 1);
        CHECK(r == h);
        const Heightfield once = rotate90(h, 1);
        CHECK(once.width() == 3);
        CHECK(once.height() == 2);
    }

    TEST_CASE("bilinear midpoint and constants") {
        const Heightfield h(2, 1, {0.0, 1.0});
        CHECK(sample_bilinear(h, 0.5, 0.5) == doctest::Approx(0.5).epsilon(1e-15));
        const Heightfield c = Heightfield::constant(5, 4, 0.3);
        for (double u : {0.0, 0.13, 0.5, 0.99}) CHECK(sample_bilinear(c, u, 1.0 - u) == doctest::Approx(0.3));
    }

    TEST_CASE("luminance coefficients") {
        const Heightfield h = luminance(TextureImage(2, 1, {{1.0, 1.0, 1.0}, {0.0, 1.0, 0.0}}));
        CHECK(h.at(0, 0) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(h.at(1, 0) == doctest::Approx(0.7152).epsilon(1e-12));
    }
}
