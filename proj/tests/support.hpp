#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "tactile/heightfield.hpp"

namespace testing {

// Unique scratch directory removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag = "tactile") {
        std::random_device rd;
        path_ = std::filesystem::temp_directory_path() /
                (tag + "_" + std::to_string(rd()) + "_" + std::to_string(rd()));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}
    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    std::size_t index(std::size_t n) { return static_cast<std::size_t>(uniform() * static_cast<double>(n)); }

private:
    std::uint64_t state_;
};

// Band-limited test relief: a few low-frequency sinusoids mapped to [0,1].
inline tactile::Heightfield sinusoid_field(std::size_t w, std::size_t h, int fx = 3, int fy = 2) {
    constexpr double two_pi = 6.283185307179586;
    std::vector<double> v(w * h);
    for (std::size_t y = 0; y < h; ++y) {
        for (std::size_t x = 0; x < w; ++x) {
            const double u = (x + 0.5) / w;
            const double t = (y + 0.5) / h;
            const double s = 0.6 * std::sin(two_pi * fx * u) * std::cos(two_pi * fy * t) +
                             0.4 * std::sin(two_pi * (u + 2.0 * t) + 0.7);
            v[y * w + x] = 0.5 + 0.5 * s;
        }
    }
    return tactile::Heightfield(w, h, std::move(v));
}

// Image patterns shared with tests/oracles/ssim_oracle.py (r = row, c = column).
inline double pattern_value(int kind, int r, int c, int rows, int cols) {
    switch (kind) {
        case 0: return 0.5 + 0.4 * std::sin(0.31 * c + 0.17 * r);
        case 1: return 0.5 + 0.3 * std::cos(0.23 * c - 0.41 * r);
        case 2: return ((7 * r + 13 * c) % 17) / 16.0;
        case 3: return 0.45 + 0.35 * std::sin(0.31 * c + 0.17 * r) + 0.1 * std::cos(0.9 * r);
        case 4: return (static_cast<double>(r) / (rows - 1)) * (static_cast<double>(c) / (cols - 1));
        case 5: return 0.0;
        default: return 1.0;
    }
}

inline tactile::Heightfield pattern_field(int kind, int rows, int cols) {
    std::vector<double> v(static_cast<std::size_t>(rows) * cols);
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) v[static_cast<std::size_t>(r) * cols + c] = pattern_value(kind, r, c, rows, cols);
    }
    return tactile::Heightfield(static_cast<std::size_t>(cols), static_cast<std::size_t>(rows), std::move(v));
}

}  // namespace testing
