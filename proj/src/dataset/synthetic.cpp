#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <random>

#include "tactile/dataset.hpp"
#include "tactile/error.hpp"
#include "tactile/heightfield.hpp"
#include "tactile/parallel.hpp"

namespace tactile {

namespace fs = std::filesystem;

namespace {

constexpr double kTwoPi = 6.283185307179586;

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Platform-independent draws; std::uniform_*_distribution output varies
// between standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    int integer(int lo, int hi) { return lo + static_cast<int>(uniform() * (hi - lo + 1)); }
    Rgb color() { return {uniform(), uniform(), uniform()}; }

private:
    std::mt19937_64 engine_;
};

Heightfield make_relief(std::size_t res, Rng& rng) {
    struct Wave {
        double fx, fy, phase, amp;
    };
    std::vector<Wave> waves;
    const int count = rng.integer(3, 5);
    for (int i = 0; i < count; ++i) {
        double fx = rng.integer(-3, 3);
        double fy = rng.integer(1, 3);
        if (rng.uniform() < 0.5) std::swap(fx, fy);
        waves.push_back({fx, fy, rng.uniform(0.0, kTwoPi), rng.uniform(0.4, 1.0)});
    }
    std::vector<double> values(res * res);
    for (std::size_t y = 0; y < res; ++y) {
        const double v = (y + 0.5) / res;
        for (std::size_t x = 0; x < res; ++x) {
            const double u = (x + 0.5) / res;
            double h = 0.0;
            for (const Wave& w : waves) h += w.amp * std::sin(kTwoPi * (w.fx * u + w.fy * v) + w.phase);
            values[y * res + x] = h;
        }
    }
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    const double min = *lo;
    const double range = *hi - *lo;
    for (double& h : values) h = std::clamp((h - min) / range, 0.0, 1.0);
    return Heightfield(res, res, std::move(values), 16);
}

// Cell index for the category's layout at (u, v), plus a flag for grout or
// seams drawn in a fixed color.
struct Cell {
    std::size_t index;
    bool seam;
};

struct Layout {
    int category;
    int rows;
    int cols;
    double seam;
    std::vector<std::array<double, 2>> sites;  // rocks only

    Cell at(double u, double v) const {
        if (category == 2) {
            std::size_t best = 0;
            double d0 = 1e9;
            double d1 = 1e9;
            for (std::size_t i = 0; i < sites.size(); ++i) {
                const double du = u - sites[i][0];
                const double dv = v - sites[i][1];
                const double d = std::sqrt(du * du + dv * dv);
                if (d < d0) {
                    d1 = d0;
                    d0 = d;
                    best = i;
                } else if (d < d1) {
                    d1 = d;
                }
            }
            return {best, d1 - d0 < seam};
        }
        const double fy = v * rows;
        const int r = std::min(rows - 1, static_cast<int>(fy));
        // Walls and roofs stagger alternate rows by half a cell.
        const double shift = (category >= 3 && (r % 2)) ? 0.5 : 0.0;
        const double fx = u * cols + shift;
        const int c = static_cast<int>(std::floor(fx));
        const double ex = fx - std::floor(fx);
        const double ey = fy - r;
        bool seam_hit = ey < seam * rows;
        if (category != 1) seam_hit = seam_hit || ex < seam * cols;
        const std::size_t idx = static_cast<std::size_t>(r) * (cols + 1) + static_cast<std::size_t>(c);
        return {idx, seam_hit};
    }
    std::size_t cell_count() const {
        return category == 2 ? sites.size() : static_cast<std::size_t>(rows) * (cols + 1) + 1;
    }
};

TextureImage make_pattern(std::size_t res, int category, Rng& rng) {
    Layout layout{category, 1, 1, 0.0, {}};
    switch (category) {
        case 0: layout.rows = rng.integer(10, 16); layout.cols = rng.integer(3, 5); layout.seam = 0.004; break;
        case 1: layout.rows = rng.integer(18, 30); layout.cols = 1; layout.seam = 0.0; break;
        case 2: {
            const int sites = rng.integer(40, 70);
            for (int i = 0; i < sites; ++i) layout.sites.push_back({rng.uniform(), rng.uniform()});
            layout.seam = 0.006;
            break;
        }
        case 3: layout.rows = rng.integer(12, 18); layout.cols = rng.integer(5, 8); layout.seam = 0.006; break;
        default: layout.rows = rng.integer(8, 14); layout.cols = rng.integer(8, 12); layout.seam = 0.004; break;
    }
    std::vector<Rgb> palette(layout.cell_count());
    for (Rgb& c : palette) c = rng.color();
    const Rgb seam_color = rng.color();
    // Fine grain inside each cell keeps the luminance busy at high frequency.
    const double grain_freq = rng.uniform(40.0, 70.0);
    const double grain_amp = rng.uniform(0.05, 0.15);

    std::vector<Rgb> pixels(res * res);
    for (std::size_t y = 0; y < res; ++y) {
        const double v = (y + 0.5) / res;
        for (std::size_t x = 0; x < res; ++x) {
            const double u = (x + 0.5) / res;
            const Cell cell = layout.at(u, v);
            Rgb c = cell.seam ? seam_color : palette[cell.index % palette.size()];
            const double g = grain_amp * std::sin(kTwoPi * grain_freq * (category == 1 ? v : u + 0.3 * v));
            c = {std::clamp(c.r + g, 0.0, 1.0), std::clamp(c.g + g, 0.0, 1.0), std::clamp(c.b + g, 0.0, 1.0)};
            pixels[y * res + x] = c;
        }
    }
    return TextureImage(res, res, std::move(pixels));
}

}  // namespace

DatasetManifest generate_synthetic_corpus(std::size_t n, std::size_t resolution, std::uint64_t seed,
                                          const fs::path& output_dir, unsigned threads) {
    if (n == 0) throw InvalidArgument("synthetic corpus needs at least one entry");
    if (resolution < 16) throw InvalidArgument("synthetic resolution must be at least 16 pixels");
    const fs::path root = fs::absolute(output_dir);
    fs::create_directories(root / "textures");
    fs::create_directories(root / "heightfields");

    DatasetManifest m;
    m.base_dir = root;
    m.seed = seed;
    m.categories = kSyntheticCategories;
    m.entries.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        char id[32];
        std::snprintf(id, sizeof id, "syn_%04zu", i);
        DatasetEntry& e = m.entries[i];
        e.id = id;
        e.category = kSyntheticCategories[i % kSyntheticCategories.size()];
        e.texture = fs::path("textures") / (e.id + ".png");
        e.heightfield = fs::path("heightfields") / (e.id + ".png");
    }

    parallel_for(n, threads, [&](std::size_t i) {
        // Separate streams so the texture draw cannot depend on the relief.
        const std::uint64_t entry_seed = splitmix64(seed ^ splitmix64(i));
        Rng relief_rng(splitmix64(entry_seed ^ 0x68656967ULL));
        Rng pattern_rng(splitmix64(entry_seed ^ 0x636f6c6fULL));
        const DatasetEntry& e = m.entries[i];
        save_heightfield(make_relief(resolution, relief_rng), m.resolve(e.heightfield), 16);
        save_texture(make_pattern(resolution, static_cast<int>(i % kSyntheticCategories.size()), pattern_rng),
                     m.resolve(e.texture));
    });
    save_manifest(m, root / "manifest.json");
    return m;
}

}  // namespace tactile
